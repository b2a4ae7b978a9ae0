#pragma once

// Maximal-interaction two-mode clustering of a double-centered matrix.
//
//   f_p = sum_{alpha,beta} |S_alpha| |T_beta| * | B(alpha,beta) / (|S_alpha| |T_beta|) |^p
//
// where B(alpha,beta) is the sum of x_ij over the block. For p = 1 and a 2 x 2
// partition the maximum is the taxicab norm of X.

#include <cstddef>
#include <vector>

#include "tcalib/residual.hpp"

namespace tcalib::clustering {

using residual::ResidualMatrix;

struct TwoModePartition {
  std::vector<std::vector<std::size_t>> row_blocks;
  std::vector<std::vector<std::size_t>> col_blocks;

  /// Builds blocks from per-index labels in [0, r) and [0, c).
  static TwoModePartition from_labels(const std::vector<std::size_t>& row_labels, std::size_t r,
                                      const std::vector<std::size_t>& col_labels, std::size_t c);
  bool operator==(const TwoModePartition&) const = default;
};

/// Throws InputError unless blocks are nonempty, disjoint and cover 0..n-1 / 0..m-1.
void validate(const TwoModePartition& part, std::size_t n, std::size_t m);

enum class Method { automatic, exhaustive, local_search };
const char* to_string(Method method);

struct ClusteringResult {
  TwoModePartition partition;
  double objective = 0.0;
  double p = 1.0;
  Method method = Method::exhaustive;
};

double objective(const ResidualMatrix& x, const TwoModePartition& part, double p);

/// Stirling number of the second kind as a double (inf on overflow).
double stirling2(std::size_t n, std::size_t k);

/// S(n,r) * S(m,c) at or below this is searched exhaustively.
inline constexpr double kExhaustiveBudget = 1e7;

/// Best partition into exactly r row blocks and c column blocks. `automatic`
/// searches exhaustively within budget and otherwise runs local search from
/// balanced starts. Forcing `exhaustive` beyond budget throws BudgetError.
ClusteringResult maximize(const ResidualMatrix& x, std::size_t r, std::size_t c, double p,
                          Method method = Method::automatic);

struct LocalSearchTrace {
  ClusteringResult result;
  std::vector<double> history;  // objective after each accepted move
};

/// Single-element reassignment moves (rows, then columns, in index order)
/// until no move improves; moves that would empty a block are skipped.
LocalSearchTrace local_search(const ResidualMatrix& x, const TwoModePartition& start, double p);

}  // namespace tcalib::clustering
