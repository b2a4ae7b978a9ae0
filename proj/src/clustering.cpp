#include "tcalib/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "tcalib/errors.hpp"

namespace tcalib::clustering {

namespace {

using residual::Matrix;

// Labels-based working form of a partition.
struct Labels {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::size_t r = 0;
  std::size_t c = 0;
};

Labels to_labels(const TwoModePartition& part, std::size_t n, std::size_t m) {
  Labels l{std::vector<std::size_t>(n), std::vector<std::size_t>(m), part.row_blocks.size(),
           part.col_blocks.size()};
  for (std::size_t a = 0; a < part.row_blocks.size(); ++a)
    for (std::size_t i : part.row_blocks[a]) l.rows[i] = a;
  for (std::size_t b = 0; b < part.col_blocks.size(); ++b)
    for (std::size_t j : part.col_blocks[b]) l.cols[j] = b;
  return l;
}

double term(double block_sum, double cells, double p) {
  const double mean = std::abs(block_sum) / cells;
  return cells * (p == 1.0 ? mean : std::pow(mean, p));
}

double score(const Matrix& sums, const std::vector<std::size_t>& row_sizes,
             const std::vector<std::size_t>& col_sizes, double p) {
  double f = 0.0;
  for (Eigen::Index a = 0; a < sums.rows(); ++a)
    for (Eigen::Index b = 0; b < sums.cols(); ++b) {
      const double cells = static_cast<double>(row_sizes[static_cast<std::size_t>(a)] *
                                               col_sizes[static_cast<std::size_t>(b)]);
      f += term(sums(a, b), cells, p);
    }
  return f;
}

Matrix block_sums(const Matrix& x, const Labels& l) {
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(l.r), static_cast<Eigen::Index>(l.c));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      s(static_cast<Eigen::Index>(l.rows[static_cast<std::size_t>(i)]),
        static_cast<Eigen::Index>(l.cols[static_cast<std::size_t>(j)])) += x(i, j);
  return s;
}

std::vector<std::size_t> sizes(const std::vector<std::size_t>& labels, std::size_t k) {
  std::vector<std::size_t> s(k, 0);
  for (std::size_t a : labels) ++s[a];
  return s;
}

// Restricted growth strings with exactly k distinct labels.
void for_each_set_partition(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> a(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      if (used == k) visit(a);
      return;
    }
    if (k - used > n - i) return;
    const std::size_t limit = std::min(used + 1, k);
    for (std::size_t label = 0; label < limit; ++label) {
      a[i] = label;
      rec(i + 1, std::max(used, label + 1));
    }
  };
  rec(0, 0);
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("p must be a finite real >= 1");
}

std::vector<std::size_t> round_robin(std::size_t n, std::size_t k) {
  std::vector<std::size_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i % k;
  return l;
}

std::vector<std::size_t> contiguous(std::size_t n, std::size_t k) {
  std::vector<std::size_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i * k / n;
  return l;
}

bool improves(double candidate, double current) {
  return candidate > current + 1e-13 * std::max(1.0, std::abs(current));
}

}  // namespace

TwoModePartition TwoModePartition::from_labels(const std::vector<std::size_t>& row_labels, std::size_t r,
                                               const std::vector<std::size_t>& col_labels, std::size_t c) {
  TwoModePartition part;
  part.row_blocks.resize(r);
  part.col_blocks.resize(c);
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    if (row_labels[i] >= r) throw InputError("row label out of range at index " + std::to_string(i));
    part.row_blocks[row_labels[i]].push_back(i);
  }
  for (std::size_t j = 0; j < col_labels.size(); ++j) {
    if (col_labels[j] >= c) throw InputError("column label out of range at index " + std::to_string(j));
    part.col_blocks[col_labels[j]].push_back(j);
  }
  return part;
}

void validate(const TwoModePartition& part, std::size_t n, std::size_t m) {
  auto check = [](const std::vector<std::vector<std::size_t>>& blocks, std::size_t size, const char* what) {
    std::vector<int> seen(size, 0);
    for (const auto& block : blocks) {
      if (block.empty()) throw InputError(std::string("invalid partition: empty ") + what + " block");
      for (std::size_t idx : block) {
        if (idx >= size) throw InputError(std::string("invalid partition: ") + what + " index out of range");
        if (seen[idx]++) throw InputError(std::string("invalid partition: ") + what + " blocks overlap");
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw InputError(std::string("invalid partition: ") + what + " blocks do not cover all indices");
    }
  };
  check(part.row_blocks, n, "row");
  check(part.col_blocks, m, "column");
}

const char* to_string(Method method) {
  switch (method) {
    case Method::automatic: return "automatic";
    case Method::exhaustive: return "exhaustive";
    case Method::local_search: return "local_search";
  }
  return "unknown";
}

double objective(const ResidualMatrix& x, const TwoModePartition& part, double p) {
  check_p(p);
  const auto n = static_cast<std::size_t>(x.rows());
  const auto m = static_cast<std::size_t>(x.cols());
  validate(part, n, m);
  const Labels l = to_labels(part, n, m);
  return score(block_sums(x.values(), l), sizes(l.rows, l.r), sizes(l.cols, l.c), p);
}

double stirling2(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  // S(i, j) = j S(i-1, j) + S(i-1, j-1), row by row.
  std::vector<double> row(k + 1, 0.0);
  row[0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = std::min(i, k); j >= 1; --j) row[j] = static_cast<double>(j) * row[j] + row[j - 1];
    row[0] = 0.0;
  }
  return row[k];
}

LocalSearchTrace local_search(const ResidualMatrix& x, const TwoModePartition& start, double p) {
  check_p(p);
  const Matrix& xv = x.values();
  const auto n = static_cast<std::size_t>(xv.rows());
  const auto m = static_cast<std::size_t>(xv.cols());
  validate(start, n, m);
  Labels l = to_labels(start, n, m);
  Matrix sums = block_sums(xv, l);
  std::vector<std::size_t> rs = sizes(l.rows, l.r);
  std::vector<std::size_t> cs = sizes(l.cols, l.c);
  double current = score(sums, rs, cs, p);

  LocalSearchTrace trace;
  trace.history.push_back(current);
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t from = l.rows[i];
      if (rs[from] == 1) continue;
      // Row i's contribution to each column block.
      Eigen::RowVectorXd contrib = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(l.c));
      for (std::size_t j = 0; j < m; ++j)
        contrib(static_cast<Eigen::Index>(l.cols[j])) += xv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      for (std::size_t to = 0; to < l.r; ++to) {
        if (to == from) continue;
        sums.row(static_cast<Eigen::Index>(from)) -= contrib;
        sums.row(static_cast<Eigen::Index>(to)) += contrib;
        --rs[from];
        ++rs[to];
        const double cand = score(sums, rs, cs, p);
        if (improves(cand, current)) {
          l.rows[i] = to;
          current = cand;
          trace.history.push_back(current);
          moved = true;
          break;
        }
        sums.row(static_cast<Eigen::Index>(from)) += contrib;
        sums.row(static_cast<Eigen::Index>(to)) -= contrib;
        ++rs[from];
        --rs[to];
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t from = l.cols[j];
      if (cs[from] == 1) continue;
      Eigen::VectorXd contrib = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l.r));
      for (std::size_t i = 0; i < n; ++i)
        contrib(static_cast<Eigen::Index>(l.rows[i])) += xv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      for (std::size_t to = 0; to < l.c; ++to) {
        if (to == from) continue;
        sums.col(static_cast<Eigen::Index>(from)) -= contrib;
        sums.col(static_cast<Eigen::Index>(to)) += contrib;
        --cs[from];
        ++cs[to];
        const double cand = score(sums, rs, cs, p);
        if (improves(cand, current)) {
          l.cols[j] = to;
          current = cand;
          trace.history.push_back(current);
          moved = true;
          break;
        }
        sums.col(static_cast<Eigen::Index>(from)) += contrib;
        sums.col(static_cast<Eigen::Index>(to)) -= contrib;
        ++cs[from];
        --cs[to];
      }
    }
  }

  trace.result.partition = TwoModePartition::from_labels(l.rows, l.r, l.cols, l.c);
  // Recompute from scratch so the reported value does not carry update drift.
  trace.result.objective = objective(x, trace.result.partition, p);
  trace.result.p = p;
  trace.result.method = Method::local_search;
  return trace;
}

ClusteringResult maximize(const ResidualMatrix& x, std::size_t r, std::size_t c, double p, Method method) {
  check_p(p);
  const Matrix& xv = x.values();
  const auto n = static_cast<std::size_t>(xv.rows());
  const auto m = static_cast<std::size_t>(xv.cols());
  if (r == 0 || c == 0) throw InputError("r and c must be >= 1");
  if (r > n) throw InputError("r = " + std::to_string(r) + " exceeds row count " + std::to_string(n));
  if (c > m) throw InputError("c = " + std::to_string(c) + " exceeds column count " + std::to_string(m));

  const double space = stirling2(n, r) * stirling2(m, c);
  if (method == Method::automatic) {
    method = space <= kExhaustiveBudget ? Method::exhaustive : Method::local_search;
  }
  if (method == Method::exhaustive && space > kExhaustiveBudget) {
    throw BudgetError("exhaustive clustering search space exceeds budget; use local search");
  }

  ClusteringResult best;
  best.p = p;
  best.objective = -std::numeric_limits<double>::infinity();

  if (method == Method::exhaustive) {
    std::vector<std::size_t> best_rows, best_cols;
    for_each_set_partition(n, r, [&](const std::vector<std::size_t>& rows) {
      // Row-aggregated matrix: r x m.
      Matrix agg = Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < n; ++i) agg.row(static_cast<Eigen::Index>(rows[i])) += xv.row(static_cast<Eigen::Index>(i));
      const std::vector<std::size_t> rs = sizes(rows, r);
      for_each_set_partition(m, c, [&](const std::vector<std::size_t>& cols) {
        Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        for (std::size_t j = 0; j < m; ++j) sums.col(static_cast<Eigen::Index>(cols[j])) += agg.col(static_cast<Eigen::Index>(j));
        const double f = score(sums, rs, sizes(cols, c), p);
        if (f > best.objective) {
          best.objective = f;
          best_rows = rows;
          best_cols = cols;
        }
      });
    });
    best.partition = TwoModePartition::from_labels(best_rows, r, best_cols, c);
    best.objective = objective(x, best.partition, p);
    best.method = Method::exhaustive;
    return best;
  }

  const std::vector<std::vector<std::size_t>> row_starts{round_robin(n, r), contiguous(n, r)};
  const std::vector<std::vector<std::size_t>> col_starts{round_robin(m, c), contiguous(m, c)};
  std::vector<TwoModePartition> tried;
  for (const auto& rows : row_starts) {
    for (const auto& cols : col_starts) {
      TwoModePartition start = TwoModePartition::from_labels(rows, r, cols, c);
      if (std::find(tried.begin(), tried.end(), start) != tried.end()) continue;
      tried.push_back(start);
      LocalSearchTrace t = local_search(x, start, p);
      if (t.result.objective > best.objective) best = std::move(t.result);
    }
  }
  best.method = Method::local_search;
  return best;
}

}  // namespace tcalib::clustering
