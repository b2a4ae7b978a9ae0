#include "tcalib/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "tcalib/errors.hpp"

namespace tcalib::tensor {

namespace {

using residual::Matrix;
using residual::Vector;

double l1_norm(const Array3& x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.dim_k(); ++k)
    for (std::size_t j = 0; j < x.dim_j(); ++j)
      for (std::size_t i = 0; i < x.dim_i(); ++i) acc += std::abs(x(i, j, k));
  return acc;
}

// Contractions leaving one mode free.
Vector contract_jk(const Array3& x, const SignVector& v, const SignVector& w) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(x.dim_i()));
  for (std::size_t k = 0; k < x.dim_k(); ++k)
    for (std::size_t j = 0; j < x.dim_j(); ++j) {
      const double s = v[j] * w[k];
      for (std::size_t i = 0; i < x.dim_i(); ++i) out(static_cast<Eigen::Index>(i)) += s * x(i, j, k);
    }
  return out;
}

Vector contract_ik(const Array3& x, const SignVector& u, const SignVector& w) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(x.dim_j()));
  for (std::size_t k = 0; k < x.dim_k(); ++k)
    for (std::size_t j = 0; j < x.dim_j(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.dim_i(); ++i) acc += u[i] * x(i, j, k);
      out(static_cast<Eigen::Index>(j)) += w[k] * acc;
    }
  return out;
}

Vector contract_ij(const Array3& x, const SignVector& u, const SignVector& v) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(x.dim_k()));
  for (std::size_t k = 0; k < x.dim_k(); ++k)
    for (std::size_t j = 0; j < x.dim_j(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.dim_i(); ++i) acc += u[i] * x(i, j, k);
      out(static_cast<Eigen::Index>(k)) += v[j] * acc;
    }
  return out;
}

// Code layout as in the matrix search: entry 0 fixed at +1, entry e >= 1 is
// -1 iff bit (len-1-e) of the code is set.
int sign_at(std::uint64_t code, std::size_t e, std::size_t len) {
  if (e == 0) return 1;
  return (code >> (len - 1 - e)) & 1U ? -1 : 1;
}

SignVector signs_of_code(std::uint64_t code, std::size_t len) {
  std::vector<int> s(len);
  for (std::size_t e = 0; e < len; ++e) s[e] = sign_at(code, e, len);
  return SignVector(std::move(s));
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t code_a = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t code_b = std::numeric_limits<std::uint64_t>::max();
};

bool better(const Candidate& l, const Candidate& r) {
  if (l.value != r.value) return l.value > r.value;
  return std::tie(l.code_a, l.code_b) < std::tie(r.code_a, r.code_b);
}

// x permuted so that modes (0, 1, 2) of the view are (a, b, c) of the search.
struct PermutedView {
  const Array3* x;
  std::array<std::size_t, 3> mode;  // view mode -> original mode
  std::array<std::size_t, 3> dims;

  double operator()(std::size_t p, std::size_t q, std::size_t r) const {
    std::array<std::size_t, 3> idx{};
    idx[mode[0]] = p;
    idx[mode[1]] = q;
    idx[mode[2]] = r;
    return (*x)(idx[0], idx[1], idx[2]);
  }
};

// Fibers over the derived mode c for fixed sign vectors on modes a and b.
Vector fibers(const PermutedView& z, const Matrix& folded_a, std::uint64_t code_b) {
  // folded_a(b, c) = sum_a s_a z(a, b, c)
  Vector acc = Vector::Zero(folded_a.cols());
  for (std::size_t q = 0; q < z.dims[1]; ++q) {
    if (sign_at(code_b, q, z.dims[1]) > 0) {
      acc += folded_a.row(static_cast<Eigen::Index>(q)).transpose();
    } else {
      acc -= folded_a.row(static_cast<Eigen::Index>(q)).transpose();
    }
  }
  return acc;
}

Matrix fold_a(const PermutedView& z, std::uint64_t code_a) {
  Matrix folded = Matrix::Zero(static_cast<Eigen::Index>(z.dims[1]), static_cast<Eigen::Index>(z.dims[2]));
  for (std::size_t p = 0; p < z.dims[0]; ++p) {
    const double s = sign_at(code_a, p, z.dims[0]);
    for (std::size_t r = 0; r < z.dims[2]; ++r)
      for (std::size_t q = 0; q < z.dims[1]; ++q)
        folded(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(r)) += s * z(p, q, r);
  }
  return folded;
}

}  // namespace

double trilinear(const Array3& x, const SignVector& u, const SignVector& v, const SignVector& w) {
  const Vector c = contract_ij(x, u, v);
  double acc = 0.0;
  for (std::size_t k = 0; k < x.dim_k(); ++k) acc += w[k] * c(static_cast<Eigen::Index>(k));
  return acc;
}

OctantSums octant_sums(const Array3& x, const SignVector& u, const SignVector& v, const SignVector& w) {
  OctantSums sums{};
  for (std::size_t k = 0; k < x.dim_k(); ++k)
    for (std::size_t j = 0; j < x.dim_j(); ++j)
      for (std::size_t i = 0; i < x.dim_i(); ++i) {
        const std::size_t o = (u[i] > 0 ? 0 : 4) + (v[j] > 0 ? 0 : 2) + (w[k] > 0 ? 0 : 1);
        sums[o] += x(i, j, k);
      }
  return sums;
}

CyclicRun cyclic_run(const Array3& x, SignVector u, SignVector v, SignVector w) {
  constexpr std::size_t kMaxCycles = 100000;
  const double slack = 1e-12 * l1_norm(x);
  CyclicRun run;
  std::set<std::tuple<SignVector, SignVector, SignVector>> seen{{u, v, w}};
  for (std::size_t cycle = 0; cycle < kMaxCycles; ++cycle) {
    SignVector nu = SignVector::of(contract_jk(x, v, w));
    SignVector nv = SignVector::of(contract_ik(x, nu, w));
    const Vector c = contract_ij(x, nu, nv);
    SignVector nw = SignVector::of(c);
    const double delta = c.cwiseAbs().sum();
    if (!run.deltas.empty() && delta < run.deltas.back() - slack) {
      throw NumericalError("cyclic tensor iteration decreased delta");
    }
    run.deltas.push_back(delta);
    const bool fixed = nu == u && nv == v && nw == w;
    u = std::move(nu);
    v = std::move(nv);
    w = std::move(nw);
    if (fixed || !seen.insert({u, v, w}).second) {
      run.axis.delta = trilinear(x, u, v, w);
      run.axis.octant_sums = octant_sums(x, u, v, w);
      run.axis.u = std::move(u);
      run.axis.v = std::move(v);
      run.axis.w = std::move(w);
      return run;
    }
  }
  throw NumericalError("cyclic tensor iteration did not reach a fixed point");
}

TensorAxis tensor_norm_exact(const Tensor3& t) {
  const Array3& x = t.values();
  const std::array<std::size_t, 3> dims{x.dim_i(), x.dim_j(), x.dim_k()};
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return dims[l] < dims[r]; });
  const PermutedView z{&x, order, {dims[order[0]], dims[order[1]], dims[order[2]]}};

  const std::size_t bits = (z.dims[0] - 1) + (z.dims[1] - 1);
  if (bits > kEnumerationBudgetLog2) {
    throw BudgetError("tensor search needs 2^" + std::to_string(bits) +
                      " sign combinations; use tensor_norm_heuristic");
  }
  const std::uint64_t total_a = std::uint64_t{1} << (z.dims[0] - 1);
  const std::uint64_t total_b = std::uint64_t{1} << (z.dims[1] - 1);
  const double slack = 1e-10 * l1_norm(x) + std::numeric_limits<double>::min();

  Candidate best;
  for (std::uint64_t code_a = 0; code_a < total_a; ++code_a) {
    const Matrix folded = fold_a(z, code_a);
    std::uint64_t code_b = 0;
    Vector acc = fibers(z, folded, code_b);
    for (std::uint64_t g = 0; g < total_b; ++g) {
      if (g != 0) {
        const std::uint64_t next = g ^ (g >> 1);
        const int bit = std::countr_zero(code_b ^ next);
        const auto q = static_cast<Eigen::Index>(z.dims[1] - 1 - static_cast<std::size_t>(bit));
        if ((next >> bit) & 1U) {
          acc -= 2.0 * folded.row(q).transpose();
        } else {
          acc += 2.0 * folded.row(q).transpose();
        }
        code_b = next;
      }
      if (acc.cwiseAbs().sum() >= best.value - slack) {
        const Candidate c{fibers(z, folded, code_b).cwiseAbs().sum(), code_a, code_b};
        if (better(c, best)) best = c;
      }
    }
  }

  // Map the enumerated sign vectors back to the original modes.
  std::array<SignVector, 3> s;
  s[order[0]] = signs_of_code(best.code_a, z.dims[0]);
  s[order[1]] = signs_of_code(best.code_b, z.dims[1]);
  s[order[2]] = SignVector::ones(z.dims[2]);
  Vector free;
  switch (order[2]) {
    case 0: free = contract_jk(x, s[1], s[2]); break;
    case 1: free = contract_ik(x, s[0], s[2]); break;
    default: free = contract_ij(x, s[0], s[1]); break;
  }
  s[order[2]] = SignVector::of(free);

  // Polish to a fixed point of the cyclic updates; an optimum stays optimal.
  TensorAxis axis = cyclic_run(x, s[0], s[1], s[2]).axis;
  axis.exact = true;
  return axis;
}

TensorAxis tensor_norm_heuristic(const Tensor3& t) {
  const Array3& x = t.values();
  TensorAxis best;
  best.delta = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.dim_j(); ++j) {
    // Start from the dominant k-fiber of slice j.
    std::size_t kstar = 0;
    double kbest = -1.0;
    for (std::size_t k = 0; k < x.dim_k(); ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.dim_i(); ++i) acc += std::abs(x(i, j, k));
      if (acc > kbest) {
        kbest = acc;
        kstar = k;
      }
    }
    Vector fiber(static_cast<Eigen::Index>(x.dim_i()));
    for (std::size_t i = 0; i < x.dim_i(); ++i) fiber(static_cast<Eigen::Index>(i)) = x(i, j, kstar);
    const SignVector u0 = SignVector::of(fiber);
    Vector slice_w = Vector::Zero(static_cast<Eigen::Index>(x.dim_k()));
    for (std::size_t k = 0; k < x.dim_k(); ++k)
      for (std::size_t i = 0; i < x.dim_i(); ++i) slice_w(static_cast<Eigen::Index>(k)) += u0[i] * x(i, j, k);
    const SignVector w0 = SignVector::of(slice_w);
    const SignVector v0 = SignVector::of(contract_ik(x, u0, w0));

    TensorAxis axis = cyclic_run(x, u0, v0, w0).axis;
    if (axis.delta > best.delta) best = std::move(axis);
  }
  best.exact = false;
  return best;
}

OctantReport octant_report(const Tensor3& t, const TensorAxis& axis) {
  const Array3& x = t.values();
  if (axis.u.size() != x.dim_i() || axis.v.size() != x.dim_j() || axis.w.size() != x.dim_k()) {
    throw InputError("axis does not match tensor dimensions");
  }
  OctantReport rep;
  rep.sums = octant_sums(x, axis.u, axis.v, axis.w);
  rep.delta = axis.delta;
  for (std::size_t i = 0; i < axis.u.size(); ++i)
    if (axis.u[i] > 0) rep.s_opt.push_back(i);
  for (std::size_t j = 0; j < axis.v.size(); ++j)
    if (axis.v[j] > 0) rep.t_opt.push_back(j);
  for (std::size_t k = 0; k < axis.w.size(); ++k)
    if (axis.w[k] > 0) rep.w_opt.push_back(k);
  return rep;
}

}  // namespace tcalib::tensor
