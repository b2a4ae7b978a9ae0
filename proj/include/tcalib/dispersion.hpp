#pragma once

// Univariate dispersion statistics: mean absolute deviation about the mean (d),
// variance / standard deviation, and mean absolute deviation about the median
// (LAD). Each is also exposed as the maximum of a gain function so callers can
// check the optimality certificates directly.

#include <cstddef>
#include <span>
#include <vector>

namespace tcalib::dispersion {

/// Finite, nonempty list of observations.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double mean() const;
  /// Even n: average of the two middle order statistics.
  double median() const;

 private:
  std::vector<double> values_;
};

/// Vector whose entries sum to zero within `tolerance * sum|x_i|`.
class CenteredVector {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  /// Throws InputError("not centered") when the invariant fails.
  explicit CenteredVector(std::vector<double> entries, double tolerance = kDefaultTolerance);

  std::span<const double> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double tolerance() const { return tolerance_; }

 private:
  std::vector<double> entries_;
  double tolerance_;
};

struct CutNormResult {
  double value = 0.0;
  std::vector<std::size_t> subset;  // S_opt = {i : x_i >= 0}
};

struct GainResult {
  double value = 0.0;
  std::vector<int> signs;  // +1 on S_opt, -1 elsewhere
};

struct DispersionReport {
  double mean = 0.0;
  double median = 0.0;
  double d = 0.0;
  double s2 = 0.0;
  double s = 0.0;
  double lad = 0.0;
  bool degenerate = false;  // zero dispersion: rc_* left empty
  std::vector<double> rc_d;
  std::vector<double> rc_s2;
  std::vector<double> rc_lad;
  std::vector<std::size_t> heavyweight_indices;
};

struct Moments {
  double s2 = 0.0;
  double s = 0.0;
};

double mad_mean(const Sample& sample);
Moments variance_and_std(const Sample& sample);
double lad(const Sample& sample);

CenteredVector center(const Sample& sample);

/// max over subsets S of sum_{i in S} x_i.
CutNormResult cut_norm_vec(const CenteredVector& x);

/// max over u in {-1,1}^n of x'u / n, which equals 2 * cut_norm / n.
GainResult gain_d(const CenteredVector& x);

/// max over u in {-1,1}^n of (y - median)'u / n.
double gain_lad(const Sample& sample);

/// max over unit-norm u of (y - mean)'u / sqrt(n).
double gain_s(const Sample& sample);

/// Statistics plus per-element relative contributions and heavyweight flags.
DispersionReport relative_contributions(const Sample& sample);

inline constexpr double kHeavyweightTolerance = 1e-10;

}  // namespace tcalib::dispersion
