#include "tcalib/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcalib/errors.hpp"

namespace tcalib::dispersion {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("empty sample");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InputError("non-finite value at index " + std::to_string(i));
    }
  }
}

double Sample::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

double Sample::median() const {
  std::vector<double> sorted(values_);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

CenteredVector::CenteredVector(std::vector<double> entries, double tolerance)
    : entries_(std::move(entries)), tolerance_(tolerance) {
  if (entries_.empty()) throw InputError("empty sample");
  double sum = 0.0;
  double abs_sum = 0.0;
  for (double x : entries_) {
    sum += x;
    abs_sum += std::abs(x);
  }
  const double bound = abs_sum > 0.0 ? tolerance_ * abs_sum : tolerance_;
  if (std::abs(sum) > bound) throw InputError("not centered");
}

double mad_mean(const Sample& sample) {
  const double mean = sample.mean();
  double acc = 0.0;
  for (double y : sample.values()) acc += std::abs(y - mean);
  return acc / static_cast<double>(sample.size());
}

Moments variance_and_std(const Sample& sample) {
  const double mean = sample.mean();
  double acc = 0.0;
  for (double y : sample.values()) acc += (y - mean) * (y - mean);
  Moments m;
  m.s2 = acc / static_cast<double>(sample.size());
  m.s = std::sqrt(m.s2);
  return m;
}

double lad(const Sample& sample) {
  const double med = sample.median();
  double acc = 0.0;
  for (double y : sample.values()) acc += std::abs(y - med);
  return acc / static_cast<double>(sample.size());
}

CenteredVector center(const Sample& sample) {
  const double mean = sample.mean();
  std::vector<double> x;
  x.reserve(sample.size());
  for (double y : sample.values()) x.push_back(y - mean);
  return CenteredVector(std::move(x));
}

CutNormResult cut_norm_vec(const CenteredVector& x) {
  CutNormResult r;
  const auto e = x.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] >= 0.0) {
      r.value += e[i];
      r.subset.push_back(i);
    }
  }
  return r;
}

GainResult gain_d(const CenteredVector& x) {
  const CutNormResult cut = cut_norm_vec(x);
  GainResult g;
  g.value = 2.0 * cut.value / static_cast<double>(x.size());
  g.signs.reserve(x.size());
  for (double xi : x.entries()) g.signs.push_back(xi >= 0.0 ? 1 : -1);
  return g;
}

double gain_lad(const Sample& sample) {
  // The maximizing sign vector is sign(y - median); the gain is then LAD itself.
  const double med = sample.median();
  double acc = 0.0;
  for (double y : sample.values()) {
    const double r = y - med;
    acc += r * (r >= 0.0 ? 1.0 : -1.0);
  }
  return acc / static_cast<double>(sample.size());
}

double gain_s(const Sample& sample) {
  const CenteredVector x = center(sample);
  double sq = 0.0;
  for (double xi : x.entries()) sq += xi * xi;
  return std::sqrt(sq) / std::sqrt(static_cast<double>(sample.size()));
}

DispersionReport relative_contributions(const Sample& sample) {
  DispersionReport rep;
  rep.mean = sample.mean();
  rep.median = sample.median();
  rep.d = mad_mean(sample);
  const Moments mom = variance_and_std(sample);
  rep.s2 = mom.s2;
  rep.s = mom.s;
  rep.lad = lad(sample);

  if (rep.d <= 0.0 || rep.s2 <= 0.0 || rep.lad <= 0.0) {
    rep.degenerate = true;
    return rep;
  }

  const auto n = static_cast<double>(sample.size());
  const auto y = sample.values();
  rep.rc_d.reserve(y.size());
  rep.rc_s2.reserve(y.size());
  rep.rc_lad.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dev = y[i] - rep.mean;
    rep.rc_d.push_back(std::abs(dev) / (n * rep.d));
    rep.rc_s2.push_back(dev * dev / (n * rep.s2));
    rep.rc_lad.push_back(std::abs(y[i] - rep.median) / (n * rep.lad));
    if (std::abs(rep.rc_d.back() - 0.5) <= kHeavyweightTolerance) {
      rep.heavyweight_indices.push_back(i);
    }
  }
  return rep;
}

}  // namespace tcalib::dispersion
