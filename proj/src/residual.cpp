#include "tcalib/residual.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tcalib/errors.hpp"

namespace tcalib::residual {

CorrespondenceMatrix::CorrespondenceMatrix(Matrix p, double total)
    : p_(std::move(p)), total_(total) {
  row_masses_ = p_.rowwise().sum();
  col_masses_ = p_.colwise().sum().transpose();
}

CorrespondenceMatrix CorrespondenceMatrix::from_counts(const Matrix& counts) {
  if (counts.rows() == 0 || counts.cols() == 0) throw InputError("empty count matrix");
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      const double c = counts(i, j);
      if (!std::isfinite(c) || c < 0.0) {
        throw InputError("invalid count at row " + std::to_string(i) + ", column " +
                         std::to_string(j));
      }
    }
  }
  const double total = counts.sum();
  if (!(total > 0.0)) throw InputError("zero total");
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    if (counts.row(i).sum() <= 0.0) throw InputError("zero row " + std::to_string(i));
  }
  for (Eigen::Index j = 0; j < counts.cols(); ++j) {
    if (counts.col(j).sum() <= 0.0) throw InputError("zero column " + std::to_string(j));
  }
  return CorrespondenceMatrix(counts / total, total);
}

const char* to_string(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::multiplicative: return "multiplicative";
    case ResidualKind::additive: return "additive";
    case ResidualKind::deflated: return "deflated";
  }
  return "unknown";
}

bool is_double_centered(const Matrix& x, double tolerance, double scale) {
  const double bound = tolerance * std::max(x.cwiseAbs().sum(), scale);
  const bool rows_ok = x.rows() == 0 || x.cols() == 0 ||
                       x.rowwise().sum().cwiseAbs().maxCoeff() <= bound;
  const bool cols_ok = x.rows() == 0 || x.cols() == 0 ||
                       x.colwise().sum().cwiseAbs().maxCoeff() <= bound;
  return rows_ok && cols_ok;
}

ResidualMatrix::ResidualMatrix(Matrix x, ResidualKind kind, double tolerance, double scale)
    : x_(std::move(x)), kind_(kind), tolerance_(tolerance), scale_(0.0) {
  if (x_.rows() == 0 || x_.cols() == 0) throw InputError("empty residual matrix");
  if (!x_.allFinite()) throw InputError("non-finite residual entry");
  scale_ = std::max(x_.cwiseAbs().sum(), std::isfinite(scale) ? scale : 0.0);
  if (!is_double_centered(x_, tolerance_, scale_)) throw InputError("matrix is not double-centered");
}

ResidualMatrix correspondence_residual(const CorrespondenceMatrix& p) {
  Matrix x = p.p() - p.row_masses() * p.col_masses().transpose();
  return ResidualMatrix(std::move(x), ResidualKind::multiplicative, kCenteringTolerance, 1.0);
}

ResidualMatrix additive_double_center(const Matrix& y) {
  if (y.rows() == 0 || y.cols() == 0) throw InputError("empty matrix");
  if (!y.allFinite()) throw InputError("non-finite matrix entry");
  const Vector row_means = y.rowwise().mean();
  const Eigen::RowVectorXd col_means = y.colwise().mean();
  const double grand = y.mean();
  Matrix x = y;
  x.colwise() -= row_means;
  x.rowwise() -= col_means;
  x.array() += grand;
  return ResidualMatrix(std::move(x), ResidualKind::additive, kCenteringTolerance, y.cwiseAbs().sum());
}

Array3::Array3(std::size_t n, std::size_t m, std::size_t t, double fill)
    : n_(n), m_(m), t_(t), data_(n * m * t, fill) {}

bool is_triple_centered(const Array3& x, double tolerance, double scale) {
  const std::size_t n = x.dim_i(), m = x.dim_j(), t = x.dim_k();
  double l1 = 0.0;
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < n; ++i) l1 += std::abs(x(i, j, k));
  const double bound = tolerance * std::max(l1, scale);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < t; ++k) s += x(i, j, k);
      if (std::abs(s) > bound) return false;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < t; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += x(i, j, k);
      if (std::abs(s) > bound) return false;
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < t; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x(i, j, k);
      if (std::abs(s) > bound) return false;
    }
  return true;
}

Tensor3::Tensor3(Array3 x, double tolerance, double scale) : x_(std::move(x)), tolerance_(tolerance) {
  if (x_.size() == 0) throw InputError("empty tensor");
  if (!is_triple_centered(x_, tolerance_, scale)) throw InputError("array is not triple-centered");
}

Tensor3 triple_center(const Array3& y) {
  const std::size_t n = y.dim_i(), m = y.dim_j(), t = y.dim_k();
  if (n == 0 || m == 0 || t == 0) throw InputError("tensor dimensions must be >= 1");

  // Marginal means over one, two and three modes.
  Matrix mean_ij = Matrix::Zero(n, m), mean_ik = Matrix::Zero(n, t), mean_jk = Matrix::Zero(m, t);
  Vector mean_i = Vector::Zero(n), mean_j = Vector::Zero(m), mean_k = Vector::Zero(t);
  double mean_all = 0.0, l1 = 0.0;
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double v = y(i, j, k);
        if (!std::isfinite(v)) throw InputError("non-finite tensor entry");
        mean_ij(i, j) += v;
        mean_ik(i, k) += v;
        mean_jk(j, k) += v;
        mean_i(i) += v;
        mean_j(j) += v;
        mean_k(k) += v;
        mean_all += v;
        l1 += std::abs(v);
      }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m), dt = static_cast<double>(t);
  mean_ij /= dt;
  mean_ik /= dm;
  mean_jk /= dn;
  mean_i /= dm * dt;
  mean_j /= dn * dt;
  mean_k /= dn * dm;
  mean_all /= dn * dm * dt;

  Array3 x(n, m, t);
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        x(i, j, k) = y(i, j, k) - mean_ij(i, j) - mean_ik(i, k) - mean_jk(j, k) + mean_i(i) +
                     mean_j(j) + mean_k(k) - mean_all;
      }
  return Tensor3(std::move(x), kCenteringTolerance, l1);
}

}  // namespace tcalib::residual
