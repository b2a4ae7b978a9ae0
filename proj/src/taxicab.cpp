#include "tcalib/taxicab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <thread>

#include "tcalib/errors.hpp"

namespace tcalib::taxicab {

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) throw InputError("sign vector entries must be -1 or +1");
  }
}

SignVector SignVector::of(const Vector& x) {
  std::vector<int> s(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) s[static_cast<std::size_t>(i)] = x(i) >= 0.0 ? 1 : -1;
  return SignVector(std::move(s));
}

Vector SignVector::as_vector() const {
  Vector v(static_cast<Eigen::Index>(signs_.size()));
  for (std::size_t i = 0; i < signs_.size(); ++i) v(static_cast<Eigen::Index>(i)) = signs_[i];
  return v;
}

SignVector SignVector::operator-() const {
  std::vector<int> s(signs_);
  for (int& x : s) x = -x;
  return SignVector(std::move(s));
}

namespace {

double l1(const Vector& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::abs(x(i));
  return acc;
}

std::vector<std::size_t> near_zero(const Vector& x, double threshold) {
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) <= threshold) idx.push_back(static_cast<std::size_t>(i));
  }
  return idx;
}

void flag_indeterminate(TaxicabAxis& axis) {
  const double threshold = kIndeterminateTolerance * axis.delta;
  axis.indeterminate_u = near_zero(axis.b, threshold);
  axis.indeterminate_v = near_zero(axis.a, threshold);
}

// Exhaustive search over s in {-1,1}^q with s_0 = +1. A code enumerates
// s_1..s_{q-1}: s_j = -1 iff bit (q-1-j) is set, so increasing codes follow
// lexicographic order of s with +1 ordered before -1.
struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t code = std::numeric_limits<std::uint64_t>::max();
};

bool better(const Candidate& lhs, const Candidate& rhs) {
  return lhs.value > rhs.value || (lhs.value == rhs.value && lhs.code < rhs.code);
}

int sign_at(std::uint64_t code, Eigen::Index j, Eigen::Index q) {
  if (j == 0) return 1;
  return (code >> (q - 1 - j)) & 1U ? -1 : 1;
}

Vector signs_of_code(std::uint64_t code, Eigen::Index q) {
  Vector s(q);
  for (Eigen::Index j = 0; j < q; ++j) s(j) = sign_at(code, j, q);
  return s;
}

Vector project_code(const Matrix& a, std::uint64_t code) {
  const Eigen::Index q = a.cols();
  Vector acc = Vector::Zero(a.rows());
  for (Eigen::Index j = 0; j < q; ++j) {
    if (sign_at(code, j, q) > 0) {
      acc += a.col(j);
    } else {
      acc -= a.col(j);
    }
  }
  return acc;
}

std::uint64_t gray(std::uint64_t g) { return g ^ (g >> 1); }

Candidate scan_range(const Matrix& a, std::uint64_t begin, std::uint64_t end, double slack) {
  constexpr std::uint64_t kResync = 4096;
  const Eigen::Index q = a.cols();
  Candidate best;
  if (begin >= end) return best;

  std::uint64_t code = gray(begin);
  Vector acc = project_code(a, code);
  for (std::uint64_t g = begin; g < end; ++g) {
    if (g != begin) {
      const std::uint64_t next = gray(g);
      if ((g - begin) % kResync == 0) {
        acc = project_code(a, next);
      } else {
        const int bit = std::countr_zero(code ^ next);
        const Eigen::Index j = q - 1 - bit;
        if ((next >> bit) & 1U) {
          acc -= 2.0 * a.col(j);
        } else {
          acc += 2.0 * a.col(j);
        }
      }
      code = next;
    }
    const double approx = l1(acc);
    if (approx >= best.value - slack) {
      const Candidate c{l1(project_code(a, code)), code};
      if (better(c, best)) best = c;
    }
  }
  return best;
}

Candidate search(const Matrix& a, unsigned workers) {
  const Eigen::Index q = a.cols();
  const std::uint64_t total = std::uint64_t{1} << (q - 1);
  const double slack = 1e-10 * a.cwiseAbs().sum() + std::numeric_limits<double>::min();

  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  constexpr std::uint64_t kMinChunk = std::uint64_t{1} << 14;
  const std::uint64_t chunks =
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, total / kMinChunk));
  if (chunks <= 1) return scan_range(a, 0, total, slack);

  std::vector<Candidate> partial(chunks);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    pool.emplace_back([&, c, lo, hi] { partial[c] = scan_range(a, lo, hi, slack); });
  }
  for (auto& t : pool) t.join();

  Candidate best;
  for (const auto& c : partial) {
    if (better(c, best)) best = c;
  }
  return best;
}

double monotone_slack(const Matrix& x) { return 1e-12 * x.cwiseAbs().sum(); }

// Sign flip of the whole axis, followed by a transition-formula polish so the
// sign(0) := +1 convention still holds on the flipped vectors.
TaxicabAxis canonicalize(const Matrix& x, const TaxicabAxis& axis) {
  if (axis.b.size() == 0 || axis.delta <= 0.0) return axis;
  Eigen::Index jmax = 0;
  axis.b.cwiseAbs().maxCoeff(&jmax);
  if (axis.b(jmax) >= 0.0) return axis;
  TaxicabAxis flipped = alternating_run(x, -axis.v).axis;
  flipped.exact = axis.exact;
  if (std::abs(flipped.delta - axis.delta) > monotone_slack(x) + 1e-15) {
    throw NumericalError("sign canonicalization changed the axis dispersion");
  }
  return flipped;
}

}  // namespace

AlternatingRun alternating_run(const Matrix& x, const SignVector& v0) {
  if (static_cast<Eigen::Index>(v0.size()) != x.rows()) {
    throw InputError("start vector length does not match row count");
  }
  constexpr std::size_t kMaxSteps = 100000;
  const double slack = monotone_slack(x);

  AlternatingRun run;
  SignVector v = v0;
  std::set<SignVector> seen{v};
  for (std::size_t step = 0; step < kMaxSteps; ++step) {
    Vector b = x.transpose() * v.as_vector();
    SignVector u = SignVector::of(b);
    Vector a = x * u.as_vector();
    SignVector next = SignVector::of(a);
    const double delta = l1(a);
    if (!run.deltas.empty() && delta < run.deltas.back() - slack) {
      throw NumericalError("alternating iteration decreased delta");
    }
    run.deltas.push_back(delta);

    const bool fixed = next == v;
    if (fixed || !seen.insert(next).second) {
      run.axis.delta = delta;
      run.axis.u = std::move(u);
      run.axis.v = std::move(v);
      run.axis.a = std::move(a);
      run.axis.b = std::move(b);
      flag_indeterminate(run.axis);
      return run;
    }
    v = std::move(next);
  }
  throw NumericalError("alternating iteration did not reach a fixed point");
}

TaxicabAxis norm_exact(const ResidualMatrix& x, unsigned workers) {
  const Matrix& xv = x.values();
  const bool on_columns = xv.cols() <= xv.rows();
  const Eigen::Index q = on_columns ? xv.cols() : xv.rows();
  if (static_cast<std::size_t>(q) > kExhaustiveLimit) {
    throw BudgetError("smaller dimension " + std::to_string(q) + " exceeds exhaustive limit " +
                      std::to_string(kExhaustiveLimit) + "; use norm_heuristic");
  }

  const Matrix a = on_columns ? xv : Matrix(xv.transpose());
  const Candidate best = search(a, workers);
  const Vector s = signs_of_code(best.code, q);

  const SignVector v0 = on_columns ? SignVector::of(xv * s) : SignVector::of(s);
  TaxicabAxis axis = alternating_run(xv, v0).axis;
  axis.exact = true;
  return axis;
}

TaxicabAxis norm_heuristic(const ResidualMatrix& x) {
  const Matrix& xv = x.values();
  TaxicabAxis best;
  best.delta = -1.0;
  for (Eigen::Index j = 0; j < xv.cols(); ++j) {
    AlternatingRun run = alternating_run(xv, SignVector::of(xv.col(j)));
    if (run.axis.delta > best.delta) best = std::move(run.axis);
  }
  best.exact = false;
  return best;
}

TaxicabAxis norm(const ResidualMatrix& x, SolverMode mode) {
  switch (mode) {
    case SolverMode::exact: return norm_exact(x);
    case SolverMode::heuristic: return norm_heuristic(x);
    case SolverMode::automatic: break;
  }
  const auto q = static_cast<std::size_t>(std::min(x.rows(), x.cols()));
  return q <= kExhaustiveLimit ? norm_exact(x) : norm_heuristic(x);
}

SeriationReport seriation_of(const ResidualMatrix& x, const TaxicabAxis& axis) {
  const Matrix& xv = x.values();
  if (static_cast<Eigen::Index>(axis.v.size()) != xv.rows() ||
      static_cast<Eigen::Index>(axis.u.size()) != xv.cols()) {
    throw InputError("axis does not match matrix dimensions");
  }
  SeriationReport rep;
  rep.delta = axis.delta;
  rep.degenerate = axis.delta <= 0.0;
  for (std::size_t i = 0; i < axis.v.size(); ++i)
    if (axis.v[i] > 0) rep.s_opt.push_back(i);
  for (std::size_t j = 0; j < axis.u.size(); ++j)
    if (axis.u[j] > 0) rep.t_opt.push_back(j);

  for (Eigen::Index i = 0; i < xv.rows(); ++i) {
    const bool in_s = axis.v[static_cast<std::size_t>(i)] > 0;
    for (Eigen::Index j = 0; j < xv.cols(); ++j) {
      const bool in_t = axis.u[static_cast<std::size_t>(j)] > 0;
      const std::size_t block = (in_s ? 0 : 2) + (in_t ? 0 : 1);
      rep.block_sums[block] += xv(i, j);
    }
  }
  rep.cut_norm = rep.block_sums[0];

  const Vector& row_key = axis.f.size() == xv.rows() ? axis.f : axis.a;
  const Vector& col_key = axis.g.size() == xv.cols() ? axis.g : axis.b;
  auto order = [](const SignVector& s, const Vector& key) {
    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
      if (s[l] != s[r]) return s[l] > s[r];
      return key(static_cast<Eigen::Index>(l)) > key(static_cast<Eigen::Index>(r));
    });
    return idx;
  };
  rep.row_order = order(axis.v, row_key);
  rep.col_order = order(axis.u, col_key);
  return rep;
}

SeriationReport cut_norm_matrix(const ResidualMatrix& x, SolverMode mode) {
  return seriation_of(x, norm(x, mode));
}

ResidualMatrix deflate(const ResidualMatrix& x, const TaxicabAxis& axis) {
  if (!(axis.delta > 0.0)) throw InputError("cannot deflate null axis");
  Matrix next = x.values() - axis.a * axis.b.transpose() / axis.delta;
  return ResidualMatrix(std::move(next), residual::ResidualKind::deflated, x.tolerance(), x.scale());
}

std::size_t full_rank_axes(const CorrespondenceMatrix& p) {
  return static_cast<std::size_t>(std::min(p.rows(), p.cols()) - 1);
}

TcaDecomposition tca(const CorrespondenceMatrix& p, std::size_t max_axes, SolverMode mode) {
  TcaDecomposition d;
  d.row_masses = p.row_masses();
  d.col_masses = p.col_masses();
  if (max_axes == 0) return d;

  ResidualMatrix x = residual::correspondence_residual(p);
  double first_delta = 0.0;
  while (d.axes.size() < max_axes) {
    if (!d.axes.empty()) x = deflate(x, d.axes.back());
    TaxicabAxis axis = canonicalize(x.values(), norm(x, mode));
    // P has total mass 1, so the first threshold is absolute.
    const double floor = d.axes.empty() ? kRankTolerance : kRankTolerance * first_delta;
    if (axis.delta < floor || axis.delta <= 0.0) break;
    if (d.axes.empty()) first_delta = axis.delta;

    axis.f = axis.a.cwiseQuotient(d.row_masses);
    axis.g = axis.b.cwiseQuotient(d.col_masses);
    d.axes.push_back(std::move(axis));
    d.residuals.push_back(x);
  }
  return d;
}

AxisContributions rc_axis(const TcaDecomposition& d, std::size_t axis_index) {
  if (axis_index >= d.axes.size()) throw InputError("axis " + std::to_string(axis_index + 1) + " does not exist");
  const TaxicabAxis& axis = d.axes[axis_index];
  const Matrix& x = d.residuals[axis_index].values();

  AxisContributions rc;
  for (Eigen::Index i = 0; i < axis.a.size(); ++i) {
    rc.rc_rows.push_back(std::abs(axis.a(i)) / axis.delta);
    if (std::abs(rc.rc_rows.back() - 0.5) <= kHeavyweightTolerance)
      rc.heavyweight_rows.push_back(static_cast<std::size_t>(i));
  }
  for (Eigen::Index j = 0; j < axis.b.size(); ++j) {
    rc.rc_cols.push_back(std::abs(axis.b(j)) / axis.delta);
    if (std::abs(rc.rc_cols.back() - 0.5) <= kHeavyweightTolerance)
      rc.heavyweight_cols.push_back(static_cast<std::size_t>(j));
  }
  for (std::size_t i : rc.heavyweight_rows) {
    for (std::size_t j : rc.heavyweight_cols) {
      const double cell = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      rc.heavyweight_cells.push_back({i, j, std::abs(cell) / axis.delta});
    }
  }
  return rc;
}

SeriationReport seriate(const TcaDecomposition& d, std::size_t axis_index) {
  if (axis_index >= d.axes.size()) throw InputError("axis " + std::to_string(axis_index + 1) + " does not exist");
  return seriation_of(d.residuals[axis_index], d.axes[axis_index]);
}

Matrix reconstruct(const TcaDecomposition& d) {
  Matrix p = d.row_masses * d.col_masses.transpose();
  for (const auto& axis : d.axes) p += axis.a * axis.b.transpose() / axis.delta;
  return p;
}

}  // namespace tcalib::taxicab
