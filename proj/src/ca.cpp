#include "tcalib/ca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tcalib/errors.hpp"
#include "tcalib/taxicab.hpp"

namespace tcalib::ca {

namespace {

// Extends the orthonormal columns u.col(0..filled-1) to a full orthonormal set
// using standard basis vectors as candidates.
void complete_basis(Matrix& u, Eigen::Index filled) {
  const Eigen::Index n = u.rows();
  Eigen::Index next = filled;
  for (Eigen::Index e = 0; e < n && next < u.cols(); ++e) {
    Vector cand = Vector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < next; ++c) cand -= u.col(c).dot(cand) * u.col(c);
    }
    const double nrm = cand.norm();
    if (nrm > 1e-8) u.col(next++) = cand / nrm;
  }
}

}  // namespace

Svd svd(const Matrix& m) {
  if (!m.allFinite()) throw InputError("svd: non-finite entry");
  const bool transposed = m.rows() < m.cols();
  Matrix a = transposed ? Matrix(m.transpose()) : m;
  const Eigen::Index n = a.rows();
  const Eigen::Index k = a.cols();
  Matrix v = Matrix::Identity(k, k);

  constexpr double kEps = 1e-15;
  // Columns below 1e-14 * ||A||_F are rounding noise of a null direction;
  // the relative test alone never settles on them.
  const double null_floor = 1e-28 * a.squaredNorm();
  int sweep = 0;
  bool rotated = true;
  while (rotated) {
    if (sweep == kMaxSweeps) {
      throw NumericalError("svd: Jacobi rotations did not converge after " +
                           std::to_string(sweep) + " sweeps");
    }
    ++sweep;
    rotated = false;
    for (Eigen::Index p = 0; p + 1 < k; ++p) {
      for (Eigen::Index q = p + 1; q < k; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (std::min(alpha, beta) <= null_floor) continue;
        if (std::abs(gamma) <= std::max(kEps * std::sqrt(alpha * beta), 1e-300)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (Eigen::Index i = 0; i < k; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }

  Vector sigma(k);
  for (Eigen::Index j = 0; j < k; ++j) sigma(j) = a.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return sigma(l) > sigma(r); });

  Svd out;
  out.sweeps = sweep;
  out.singular_values.resize(k);
  Matrix left = Matrix::Zero(n, k);
  Matrix right(k, k);
  const double floor = (sigma.size() > 0 ? sigma.maxCoeff() : 0.0) * 1e-13;
  Eigen::Index filled = 0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index j = order[static_cast<std::size_t>(c)];
    out.singular_values(c) = sigma(j);
    right.col(c) = v.col(j);
    if (sigma(j) > floor && sigma(j) > 0.0) {
      left.col(c) = a.col(j) / sigma(j);
      filled = c + 1;
    }
  }
  // Columns for (numerically) zero singular values carry no information; give
  // them any orthonormal completion.
  complete_basis(left, filled);

  if (transposed) {
    out.u = std::move(right);
    out.v = std::move(left);
  } else {
    out.u = std::move(left);
    out.v = std::move(right);
  }
  return out;
}

CaDecomposition ca(const CorrespondenceMatrix& p, std::size_t max_axes) {
  CaDecomposition d;
  d.row_masses = p.row_masses();
  d.col_masses = p.col_masses();
  const Vector sr = d.row_masses.cwiseSqrt();
  const Vector sc = d.col_masses.cwiseSqrt();
  const Matrix expected = d.row_masses * d.col_masses.transpose();
  const Matrix s = (p.p() - expected).cwiseQuotient(sr * sc.transpose());
  d.total_inertia = s.squaredNorm();

  const Svd dec = svd(s);
  for (Eigen::Index a = 0; a < dec.singular_values.size(); ++a) {
    if (d.axes() >= max_axes) break;
    const double sigma = dec.singular_values(a);
    if (!(sigma > 1e-12)) break;
    Vector u = dec.u.col(a);
    Vector v = dec.v.col(a);
    Vector g = sigma * v.cwiseQuotient(sc);
    Eigen::Index jmax = 0;
    g.cwiseAbs().maxCoeff(&jmax);
    if (g(jmax) < 0.0) {
      u = -u;
      v = -v;
      g = -g;
    }
    d.singular_values.push_back(sigma);
    d.principal_inertias.push_back(sigma * sigma);
    d.row_scores.push_back(sigma * u.cwiseQuotient(sr));
    d.col_scores.push_back(std::move(g));
    // r f^2 / lambda reduces to u^2; computed from the scores to match the definition.
    d.row_ctr.push_back(d.row_masses.cwiseProduct(d.row_scores.back().cwiseAbs2()) / (sigma * sigma));
    d.col_ctr.push_back(d.col_masses.cwiseProduct(d.col_scores.back().cwiseAbs2()) / (sigma * sigma));
  }
  return d;
}

Matrix reconstruct(const CaDecomposition& d) {
  Matrix inner = Matrix::Ones(d.row_masses.size(), d.col_masses.size());
  for (std::size_t a = 0; a < d.axes(); ++a) {
    inner += d.row_scores[a] * d.col_scores[a].transpose() / d.singular_values[a];
  }
  return (d.row_masses * d.col_masses.transpose()).cwiseProduct(inner);
}

namespace {

bool signs_agree(const Vector& x, const Vector& y) {
  auto same = [&](double flip) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if ((x(i) >= 0.0) != (flip * y(i) >= 0.0)) return false;
    }
    return true;
  };
  return same(1.0) || same(-1.0);
}

}  // namespace

Comparison compare_ca_tca(const CorrespondenceMatrix& p, std::size_t axis) {
  Comparison cmp;
  cmp.axis = axis;
  const CaDecomposition c = ca(p, axis + 1);
  const taxicab::TcaDecomposition t = taxicab::tca(p, axis + 1);
  if (c.axes() <= axis || t.axes.size() <= axis) return cmp;

  const taxicab::AxisContributions rc = taxicab::rc_axis(t, axis);
  const auto& tax = t.axes[axis];
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    cmp.entries.push_back({true, si, c.row_scores[axis](i), c.row_ctr[axis](i), tax.f(i), rc.rc_rows[si]});
  }
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const auto sj = static_cast<std::size_t>(j);
    cmp.entries.push_back({false, sj, c.col_scores[axis](j), c.col_ctr[axis](j), tax.g(j), rc.rc_cols[sj]});
  }
  for (const auto& e : cmp.entries) {
    cmp.ca_max_contribution = std::max(cmp.ca_max_contribution, e.ca_contribution);
    cmp.tca_max_contribution = std::max(cmp.tca_max_contribution, e.tca_contribution);
  }
  cmp.row_signs_agree = signs_agree(c.row_scores[axis], tax.f);
  cmp.col_signs_agree = signs_agree(c.col_scores[axis], tax.g);
  return cmp;
}

}  // namespace tcalib::ca
