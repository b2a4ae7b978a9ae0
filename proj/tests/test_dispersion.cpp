#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tcalib/dispersion.hpp"
#include "tcalib/errors.hpp"

using namespace tcalib::dispersion;
using doctest::Approx;

TEST_CASE("statistics of (1,2,3,6)") {
  const Sample s({1, 2, 3, 6});
  CHECK(mad_mean(s) == Approx(1.5));
  CHECK(variance_and_std(s).s2 == Approx(3.5));
  CHECK(variance_and_std(s).s == Approx(std::sqrt(3.5)));
  CHECK(s.median() == Approx(2.5));
  CHECK(lad(s) == Approx(1.5));
  CHECK(gain_lad(s) == Approx(1.5));
  CHECK(gain_s(s) == Approx(std::sqrt(3.5)));
  const auto c = center(s);
  const std::vector<double> expected{-2, -1, 0, 3};
  CHECK(std::equal(c.entries().begin(), c.entries().end(), expected.begin()));
}

TEST_CASE("statistics of (0,0,0,4)") {
  const Sample s({0, 0, 0, 4});
  CHECK(variance_and_std(s).s2 == Approx(3.0));
  CHECK(s.median() == 0.0);
  CHECK(lad(s) == Approx(1.0));
  CHECK(gain_lad(s) == Approx(1.0));
  CHECK(gain_s(s) == Approx(std::sqrt(3.0)));

  const auto rep = relative_contributions(s);
  REQUIRE_FALSE(rep.degenerate);
  const std::vector<double> rc_d{1.0 / 6, 1.0 / 6, 1.0 / 6, 0.5};
  const std::vector<double> rc_s2{1.0 / 12, 1.0 / 12, 1.0 / 12, 0.75};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.rc_d[i] == Approx(rc_d[i]));
    CHECK(rep.rc_s2[i] == Approx(rc_s2[i]));
  }
  REQUIRE(rep.heavyweight_indices.size() == 1);
  CHECK(rep.heavyweight_indices[0] == 3);
}

TEST_CASE("constant samples are degenerate") {
  const Sample s({2.5, 2.5, 2.5});
  CHECK(mad_mean(s) == 0.0);
  CHECK(variance_and_std(s).s2 == 0.0);
  CHECK(lad(s) == 0.0);
  CHECK(gain_lad(s) == 0.0);
  CHECK(gain_s(s) == 0.0);
  const auto rep = relative_contributions(s);
  CHECK(rep.degenerate);
  CHECK(rep.rc_d.empty());
  CHECK(rep.heavyweight_indices.empty());
  const auto c = center(s);
  for (double x : c.entries()) CHECK(x == 0.0);
}

TEST_CASE("cut norm and gain of (-2,-1,0,3)") {
  const CenteredVector x({-2, -1, 0, 3});
  const auto cn = cut_norm_vec(x);
  CHECK(cn.value == Approx(3.0));
  CHECK(cn.subset == std::vector<std::size_t>{2, 3});
  CHECK(cn.value == Approx(oracle::vector_cut_norm({-2, -1, 0, 3})));
  const auto g = gain_d(x);
  CHECK(g.value == Approx(1.5));
  CHECK(g.signs == std::vector<int>{-1, -1, 1, 1});
  CHECK(g.value == Approx(oracle::vector_gain({-2, -1, 0, 3})));
  CHECK(cut_norm_vec(CenteredVector({0, 0, 0})).value == 0.0);
  CHECK(gain_d(CenteredVector({0, 0})).value == 0.0);
}

TEST_CASE("first taxicab projection of the asbestos table") {
  // a_1 as printed sums to -0.0001 through rounding; center() absorbs that.
  const Sample a1({-0.2362, -0.0303, 0.0334, 0.1340, 0.0990});
  CHECK(std::abs(mad_mean(a1) - 0.10658) <= 2e-4);
  const auto x = center(a1);
  CHECK(std::abs(cut_norm_vec(x).value - 0.2664) <= 2e-4);
  CHECK(std::abs(gain_d(x).value - 0.10658) <= 2e-4);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(Sample({}), tcalib::InputError);
  CHECK_THROWS_AS(Sample({1.0, NAN}), tcalib::InputError);
  CHECK_THROWS_AS(Sample({1.0, INFINITY}), tcalib::InputError);
  CHECK_THROWS_WITH_AS(CenteredVector({1.0, 1.0}), doctest::Contains("not centered"), tcalib::InputError);
  CHECK_NOTHROW(CenteredVector({1.0, -1.0 + 1e-12}));
}

TEST_CASE("property: d equals twice the cut norm over n, against subset enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dn(1, 12);
  std::normal_distribution<double> val(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> y(dn(rng));
    for (auto& v : y) v = val(rng);
    const Sample s(y);
    const auto x = center(s);
    const std::vector<double> xs(x.entries().begin(), x.entries().end());
    const double n = static_cast<double>(y.size());
    CHECK(oracle::rel_close(mad_mean(s), 2.0 * oracle::vector_cut_norm(xs) / n, 1e-12, 1e-15));
    CHECK(oracle::rel_close(gain_d(x).value, oracle::vector_gain(xs), 1e-12, 1e-15));
  }
}

TEST_CASE("property: gain_d dominates random sign vectors") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> dn(1, 20);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(dn(rng));
    for (auto& v : y) v = val(rng);
    const auto x = center(Sample(y));
    const double best = gain_d(x).value;
    for (int k = 0; k < 200; ++k) {
      double dot = 0.0;
      for (double e : x.entries()) dot += coin(rng) ? e : -e;
      CHECK(best >= dot / static_cast<double>(x.size()) - 1e-12);
    }
  }
}

TEST_CASE("property: LAD <= d <= s and contribution bounds") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> dn(1, 50);
  std::lognormal_distribution<double> val(0.0, 1.5);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> y(dn(rng));
    for (auto& v : y) v = val(rng);
    const Sample s(y);
    const auto rep = relative_contributions(s);
    const double slack = 1e-12 * std::max(1.0, rep.s);
    REQUIRE(rep.lad <= rep.d + slack);
    REQUIRE(rep.d <= rep.s + slack);
    if (rep.degenerate) continue;
    double sum_d = 0, sum_s2 = 0, sum_lad = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      REQUIRE(rep.rc_d[i] >= 0.0);
      REQUIRE(rep.rc_d[i] <= 0.5 + 1e-12);
      REQUIRE(rep.rc_s2[i] >= 0.0);
      REQUIRE(rep.rc_s2[i] < 1.0);
      REQUIRE(rep.rc_lad[i] >= 0.0);
      REQUIRE(rep.rc_lad[i] <= 1.0);
      sum_d += rep.rc_d[i];
      sum_s2 += rep.rc_s2[i];
      sum_lad += rep.rc_lad[i];
    }
    REQUIRE(std::abs(sum_d - 1.0) <= 1e-10);
    REQUIRE(std::abs(sum_s2 - 1.0) <= 1e-10);
    REQUIRE(std::abs(sum_lad - 1.0) <= 1e-10);
  }
}

TEST_CASE("property: heavyweights never reach RC_s2 = 1") {
  std::mt19937_64 rng(14);
  // n = 2 makes both points heavyweights.
  std::uniform_int_distribution<std::size_t> dn(3, 15);
  std::uniform_real_distribution<double> val(0.5, 10.0);
  std::uniform_real_distribution<double> jitter(-0.05, 0.0);
  for (int trial = 0; trial < 300; ++trial) {
    // One point above the mean, the rest below it: the lone point carries half
    // of n*d whatever the spread below.
    const std::size_t n = dn(rng);
    std::vector<double> y(n);
    for (auto& v : y) v = 1.0 + jitter(rng);
    const std::size_t h = static_cast<std::size_t>(trial) % n;
    y[h] = 1.5 + val(rng);
    const auto rep = relative_contributions(Sample(y));
    REQUIRE(rep.heavyweight_indices.size() == 1);
    CHECK(rep.heavyweight_indices[0] == h);
    CHECK(rep.rc_d[h] == Approx(0.5));
    CHECK(rep.rc_s2[h] < 1.0);
    CHECK(rep.rc_lad[h] <= 1.0);
  }
}

TEST_CASE("a heavyweight can attain RC_LAD = 1") {
  // (0,0,0,4): d = 1.5 and |4 - mean| = 3 = n*d/2, so 4 is a heavyweight;
  // the median is 0 and LAD = 1, so RC_LAD(4) = 4 / (4 * 1) = 1.
  const auto rep = relative_contributions(Sample({0, 0, 0, 4}));
  REQUIRE(rep.heavyweight_indices == std::vector<std::size_t>{3});
  CHECK(rep.rc_lad[3] == Approx(1.0));
  CHECK(rep.rc_s2[3] == Approx(0.75));
}

TEST_CASE("property: translation invariance and scale equivariance") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<std::size_t> dn(1, 30);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> y(dn(rng));
    for (auto& v : y) v = val(rng);
    const double c = val(rng);
    const double lambda = val(rng);
    std::vector<double> shifted = y, scaled = y;
    for (auto& v : shifted) v += c;
    for (auto& v : scaled) v *= lambda;
    const Sample s(y), st(shifted), ss(scaled);
    const double d = mad_mean(s), sd = variance_and_std(s).s, l = lad(s);
    const double tol = 1e-9 * (1.0 + std::abs(c));
    CHECK(std::abs(mad_mean(st) - d) <= tol);
    CHECK(std::abs(variance_and_std(st).s - sd) <= tol);
    CHECK(std::abs(lad(st) - l) <= tol);
    const double al = std::abs(lambda);
    CHECK(std::abs(mad_mean(ss) - al * d) <= 1e-9 * (1.0 + al * d));
    CHECK(std::abs(variance_and_std(ss).s - al * sd) <= 1e-9 * (1.0 + al * sd));
    CHECK(std::abs(lad(ss) - al * l) <= 1e-9 * (1.0 + al * l));
  }
}
