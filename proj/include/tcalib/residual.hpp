#pragma once

// Double- and triple-centered residual arrays.
//
// A correspondence matrix P (nonnegative, total 1) yields the multiplicative
// residual x_ij = p_ij - p_i* p_*j. An arbitrary matrix Y yields the additive
// interaction x_ij = y_ij - ybar_i* - ybar_*j + ybar_**. Both are
// double-centered; every constructor checks that on the way out.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace tcalib::residual {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kCenteringTolerance = 1e-10;

class CorrespondenceMatrix {
 public:
  /// Normalizes counts to total 1. Rejects negative or non-finite cells, a zero
  /// total, and any all-zero row or column (named by index).
  static CorrespondenceMatrix from_counts(const Matrix& counts);

  const Matrix& p() const { return p_; }
  const Vector& row_masses() const { return row_masses_; }
  const Vector& col_masses() const { return col_masses_; }
  Eigen::Index rows() const { return p_.rows(); }
  Eigen::Index cols() const { return p_.cols(); }
  /// Grand total of the counts this matrix was built from.
  double total() const { return total_; }

 private:
  CorrespondenceMatrix(Matrix p, double total);

  Matrix p_;
  Vector row_masses_;
  Vector col_masses_;
  double total_ = 1.0;
};

enum class ResidualKind { multiplicative, additive, deflated };

const char* to_string(ResidualKind kind);

/// Double-centered matrix: every row and column sums to zero within
/// `tolerance * max(||x||_1, scale)` (entrywise L1). `scale` is the L1 norm of
/// the data x was derived from, so residuals that are pure rounding noise pass.
class ResidualMatrix {
 public:
  /// Throws InputError when x is not double-centered.
  ResidualMatrix(Matrix x, ResidualKind kind, double tolerance = kCenteringTolerance, double scale = 0.0);

  const Matrix& values() const { return x_; }
  ResidualKind kind() const { return kind_; }
  double tolerance() const { return tolerance_; }
  double scale() const { return scale_; }
  Eigen::Index rows() const { return x_.rows(); }
  Eigen::Index cols() const { return x_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return x_(i, j); }

 private:
  Matrix x_;
  ResidualKind kind_;
  double tolerance_;
  double scale_;
};

/// True when every row and column of x sums to zero within
/// tolerance * max(||x||_1, scale).
bool is_double_centered(const Matrix& x, double tolerance = kCenteringTolerance, double scale = 0.0);

ResidualMatrix correspondence_residual(const CorrespondenceMatrix& p);
ResidualMatrix additive_double_center(const Matrix& y);

/// Dense n x m x t array, element (i, j, k).
class Array3 {
 public:
  Array3() = default;
  Array3(std::size_t n, std::size_t m, std::size_t t, double fill = 0.0);

  std::size_t dim_i() const { return n_; }
  std::size_t dim_j() const { return m_; }
  std::size_t dim_k() const { return t_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(k * m_ + j) * n_ + i];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(k * m_ + j) * n_ + i];
  }

  bool operator==(const Array3&) const = default;

 private:
  std::size_t n_ = 0, m_ = 0, t_ = 0;
  std::vector<double> data_;
};

/// Triple-centered array: all mode-wise fiber sums vanish.
class Tensor3 {
 public:
  /// Throws InputError when some fiber sum exceeds tolerance * max(||x||_1, scale).
  explicit Tensor3(Array3 x, double tolerance = kCenteringTolerance, double scale = 0.0);

  const Array3& values() const { return x_; }
  double tolerance() const { return tolerance_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return x_(i, j, k); }

 private:
  Array3 x_;
  double tolerance_;
};

bool is_triple_centered(const Array3& x, double tolerance = kCenteringTolerance, double scale = 0.0);

/// x_ijk = y_ijk - ybar_ij* - ybar_i*k - ybar_*jk + ybar_i** + ybar_*j* + ybar_**k - ybar_***
Tensor3 triple_center(const Array3& y);

}  // namespace tcalib::residual
