#pragma once

// Classical (L2) correspondence analysis, used as the reference point for the
// taxicab variant.

#include <cstddef>
#include <vector>

#include "tcalib/residual.hpp"

namespace tcalib::ca {

using residual::CorrespondenceMatrix;
using residual::Matrix;
using residual::Vector;

/// Thin SVD M = U diag(sigma) V'. U is n x k, V is m x k with k = min(n, m),
/// sigma sorted in decreasing order.
struct Svd {
  Matrix u;
  Vector singular_values;
  Matrix v;
  int sweeps = 0;
};

/// One-sided (Hestenes) Jacobi SVD. Throws NumericalError if the rotations
/// have not converged after kMaxSweeps sweeps.
Svd svd(const Matrix& m);

inline constexpr int kMaxSweeps = 60;

struct CaDecomposition {
  Vector row_masses;
  Vector col_masses;
  std::vector<double> singular_values;
  std::vector<double> principal_inertias;  // sigma^2
  std::vector<Vector> row_scores;          // f = sigma u / sqrt(r)
  std::vector<Vector> col_scores;          // g = sigma v / sqrt(c)
  std::vector<Vector> row_ctr;             // r f^2 / lambda, sums to 1 per axis
  std::vector<Vector> col_ctr;
  double total_inertia = 0.0;  // sum (p - r c)^2 / (r c)

  std::size_t axes() const { return singular_values.size(); }
};

/// SVD of the standardized residuals (p_ij - r_i c_j) / sqrt(r_i c_j). Keeps
/// at most max_axes axes with sigma above 1e-12. Axes are sign-canonicalized
/// so the largest |g| is positive.
CaDecomposition ca(const CorrespondenceMatrix& p, std::size_t max_axes);

/// r_i c_j (1 + sum_alpha f_alpha(i) g_alpha(j) / sigma_alpha).
Matrix reconstruct(const CaDecomposition& d);

struct ComparisonEntry {
  bool is_row = true;
  std::size_t index = 0;
  double ca_score = 0.0;
  double ca_contribution = 0.0;
  double tca_score = 0.0;
  double tca_contribution = 0.0;
};

/// Side-by-side point contributions of CA and TCA on one axis (0-based).
struct Comparison {
  std::size_t axis = 0;
  std::vector<ComparisonEntry> entries;  // rows first, then columns
  double ca_max_contribution = 0.0;
  double tca_max_contribution = 0.0;
  // Whether sign(f), sign(g) agree between the two methods up to one global flip.
  bool row_signs_agree = false;
  bool col_signs_agree = false;

  bool empty() const { return entries.empty(); }
};

/// Empty comparison when either method has fewer than axis + 1 axes.
Comparison compare_ca_tca(const CorrespondenceMatrix& p, std::size_t axis);

}  // namespace tcalib::ca
