#pragma once

// Taxicab (L1) matrix decomposition of double-centered matrices.
//
// For a double-centered X the taxicab norm
//     delta = max_{u in {-1,1}^m} ||X u||_1 = max_{u,v} v' X u
// equals four times the cut norm max_{S,T} sum_{i in S, j in T} x_ij, and the
// optimal (u, v) pair induces a bipartition of rows and columns whose four
// blocks all carry the same absolute sum delta / 4. Repeating the search on
// the rank-one deflated residual X - a b' / delta gives the taxicab SVD.
//
// Axis indices in this API are 0-based.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tcalib/residual.hpp"

namespace tcalib::taxicab {

using residual::CorrespondenceMatrix;
using residual::Matrix;
using residual::ResidualMatrix;
using residual::Vector;

/// Entries in {-1, +1}. sign(0) is +1 everywhere a SignVector is formed.
class SignVector {
 public:
  SignVector() = default;
  /// Throws InputError if an entry is neither -1 nor +1.
  explicit SignVector(std::vector<int> signs);
  /// Elementwise sign with sign(0) := +1.
  static SignVector of(const Vector& x);
  static SignVector ones(std::size_t n) { return SignVector(std::vector<int>(n, 1)); }

  std::span<const int> signs() const { return signs_; }
  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  Vector as_vector() const;
  SignVector operator-() const;
  bool operator==(const SignVector&) const = default;
  auto operator<=>(const SignVector&) const = default;

 private:
  std::vector<int> signs_;
};

/// One taxicab dimension of a residual matrix X (n x m).
struct TaxicabAxis {
  double delta = 0.0;  // ||a||_1 = ||b||_1 = v' X u
  SignVector u;        // length m, u = sign(b)
  SignVector v;        // length n, v = sign(a)
  Vector a;            // X u
  Vector b;            // X' v
  Vector f;            // a / row masses (filled by tca)
  Vector g;            // b / column masses (filled by tca)
  bool exact = false;  // true when delta is certified by exhaustive search
  // Coordinates whose projection is numerically zero; their sign is arbitrary.
  std::vector<std::size_t> indeterminate_u;
  std::vector<std::size_t> indeterminate_v;
};

/// Balanced 2-blocks seriation induced by an axis.
struct SeriationReport {
  std::vector<std::size_t> s_opt;  // rows with v = +1
  std::vector<std::size_t> t_opt;  // columns with u = +1
  // Block sums in the order (S,T), (S,T'), (S',T), (S',T').
  std::array<double, 4> block_sums{};
  double cut_norm = 0.0;  // sum over (S,T) = delta / 4
  double delta = 0.0;
  std::vector<std::size_t> row_order;
  std::vector<std::size_t> col_order;
  bool degenerate = false;  // delta == 0
};

enum class SolverMode { automatic, exact, heuristic };

/// Exhaustive search handles min(n, m) up to this size (2^21 sign vectors).
inline constexpr std::size_t kExhaustiveLimit = 22;
/// Relative threshold below which |a_i| or |b_j| counts as zero.
inline constexpr double kIndeterminateTolerance = 1e-12;
/// delta_alpha < kRankTolerance * delta_1 ends the decomposition.
inline constexpr double kRankTolerance = 1e-12;
inline constexpr double kHeavyweightTolerance = 1e-10;

/// Global maximum of ||X u||_1, enumerating sign vectors on the smaller side.
/// Ties go to the lexicographically smallest enumerated sign vector (+1 before
/// -1). `workers` = 0 picks hardware concurrency; the result does not depend on
/// it. Throws BudgetError above kExhaustiveLimit.
TaxicabAxis norm_exact(const ResidualMatrix& x, unsigned workers = 0);

/// Best fixed point of the transition formulas v <- sign(Xu), u <- sign(X'v)
/// over one deterministic start per column of X.
TaxicabAxis norm_heuristic(const ResidualMatrix& x);

/// Dispatches on mode; `automatic` is exact within budget, heuristic beyond.
TaxicabAxis norm(const ResidualMatrix& x, SolverMode mode = SolverMode::automatic);

/// One alternating run from v0, with the delta after every step.
struct AlternatingRun {
  TaxicabAxis axis;
  std::vector<double> deltas;
};
AlternatingRun alternating_run(const Matrix& x, const SignVector& v0);

/// Block sums of X on the bipartition induced by `axis`.
SeriationReport seriation_of(const ResidualMatrix& x, const TaxicabAxis& axis);

/// Cut norm of X with its certifying bipartition.
SeriationReport cut_norm_matrix(const ResidualMatrix& x, SolverMode mode = SolverMode::automatic);

/// Wedderburn rank-one reduction X - a b' / delta.
ResidualMatrix deflate(const ResidualMatrix& x, const TaxicabAxis& axis);

struct TcaDecomposition {
  Vector row_masses;
  Vector col_masses;
  std::vector<TaxicabAxis> axes;
  // residuals[alpha] is the matrix axes[alpha] was extracted from.
  std::vector<ResidualMatrix> residuals;

  std::size_t rank_used() const { return axes.size(); }
};

/// Number of axes that exhausts the rank of P - r c' for an n x m table.
std::size_t full_rank_axes(const CorrespondenceMatrix& p);

/// Taxicab correspondence analysis. Each axis is sign-canonicalized so that
/// its largest-magnitude column projection b_j is positive.
TcaDecomposition tca(const CorrespondenceMatrix& p, std::size_t max_axes,
                     SolverMode mode = SolverMode::automatic);

struct HeavyweightCell {
  std::size_t row = 0;
  std::size_t col = 0;
  double rc = 0.0;
};

struct AxisContributions {
  std::vector<double> rc_rows;  // |a_i| / delta
  std::vector<double> rc_cols;  // |b_j| / delta
  std::vector<std::size_t> heavyweight_rows;
  std::vector<std::size_t> heavyweight_cols;
  std::vector<HeavyweightCell> heavyweight_cells;
};

AxisContributions rc_axis(const TcaDecomposition& d, std::size_t axis_index);

/// Seriation of axis `axis_index`: rows grouped by v (+1 first) and sorted by
/// descending f inside each group, columns likewise by u and g.
SeriationReport seriate(const TcaDecomposition& d, std::size_t axis_index);

/// r c' + sum_alpha a_alpha b_alpha' / delta_alpha.
Matrix reconstruct(const TcaDecomposition& d);

}  // namespace tcalib::taxicab
