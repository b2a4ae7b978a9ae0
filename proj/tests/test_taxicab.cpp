#include <doctest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "tcalib/errors.hpp"
#include "tcalib/io.hpp"
#include "tcalib/taxicab.hpp"

using namespace tcalib::taxicab;
using tcalib::residual::ResidualKind;
using doctest::Approx;

namespace {

CorrespondenceMatrix dataset(const char* name) {
  return CorrespondenceMatrix::from_counts(tcalib::io::load_dataset(name).values);
}

ResidualMatrix centered(const Matrix& x) { return ResidualMatrix(x, ResidualKind::additive); }

// +1 or -1 so that sign * got matches want as closely as possible.
double align(const Vector& got, const std::vector<double>& want) {
  double dot = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) dot += got(static_cast<Eigen::Index>(i)) * want[i];
  return dot >= 0.0 ? 1.0 : -1.0;
}

double max_diff(const Vector& got, const std::vector<double>& want, double sign) {
  double m = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i)
    m = std::max(m, std::abs(sign * got(static_cast<Eigen::Index>(i)) - want[i]));
  return m;
}

// Singular values above 1e-9 * scale; scale defaults to the largest one of x.
Eigen::Index numeric_rank(const Matrix& x, double scale = 0.0) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(x).singularValues();
  const double floor = 1e-9 * std::max(scale, sv.size() ? sv(0) : 0.0);
  return (sv.array() > floor).count();
}

}  // namespace

TEST_CASE("asbestos first axis") {
  const auto d = tca(dataset("asbestos"), 1);
  REQUIRE(d.axes.size() == 1);
  const auto& ax = d.axes[0];
  CHECK(ax.exact);
  CHECK(std::abs(ax.delta - 0.5328) <= 5e-4);

  const std::vector<double> f{-0.7624, -0.0892, 0.4841, 0.7718, 0.9138};
  const std::vector<double> g{-0.5175, 0.2380, 1.1553, 1.2981};
  const double s = align(ax.f, f);
  CHECK(max_diff(ax.f, f, s) <= 5e-4);
  CHECK(max_diff(ax.g, g, s) <= 5e-4);
  const std::vector<int> u{-1, 1, 1, 1}, v{-1, -1, 1, 1, 1};
  for (std::size_t j = 0; j < 4; ++j) CHECK(s * ax.u[j] == u[j]);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s * ax.v[i] == v[i]);

  // Canonical sign: largest |b| (G0) positive.
  CHECK(ax.b(0) > 0.0);
}

TEST_CASE("asbestos heuristic agrees with exhaustive search") {
  const ResidualMatrix x = tcalib::residual::correspondence_residual(dataset("asbestos"));
  const auto e = norm_exact(x);
  const auto h = norm_heuristic(x);
  CHECK(h.delta == Approx(e.delta).epsilon(1e-12));
  CHECK_FALSE(h.exact);
  const bool same = (h.u == e.u && h.v == e.v) || (h.u == -e.u && h.v == -e.v);
  CHECK(same);
}

TEST_CASE("asbestos second axis and deflation") {
  const auto d = tca(dataset("asbestos"), 2);
  REQUIRE(d.axes.size() == 2);
  CHECK(std::abs(d.axes[1].delta - 0.2132) <= 5e-4);
  const std::vector<double> g2{0.0, -0.3257, 0.5681, 0.9521};
  const double s = align(d.axes[1].g, g2);
  CHECK(max_diff(d.axes[1].g, g2, s) <= 1e-3);

  const Matrix& p2 = d.residuals[1].values();
  CHECK(p2.col(0).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(std::abs(p2(0, 1)) - 0.0347) <= 5e-4);
  CHECK(p2(0, 1) < 0.0);  // deflation does not depend on axis signs

  const auto rc = rc_axis(d, 0);
  CHECK(std::abs(rc.rc_cols[0] - 0.5) <= 1e-10);
  CHECK(rc.heavyweight_cols == std::vector<std::size_t>{0});
  // G0 is a zero column of P2: its sign on axis 2 is arbitrary.
  CHECK(d.axes[1].indeterminate_u == std::vector<std::size_t>{0});
}

TEST_CASE("asbestos seriation and cut norm") {
  const auto d = tca(dataset("asbestos"), 2);
  const auto s1 = seriate(d, 0);
  CHECK(std::abs(s1.cut_norm - 0.1332) <= 2e-4);
  CHECK(s1.cut_norm == Approx(d.axes[0].delta / 4).epsilon(1e-10));
  for (double b : s1.block_sums) CHECK(std::abs(std::abs(b) - s1.cut_norm) <= 1e-10 * s1.cut_norm);
  CHECK(s1.block_sums[0] > 0);
  CHECK(s1.block_sums[1] < 0);
  CHECK(s1.block_sums[2] < 0);
  CHECK(s1.block_sums[3] > 0);

  // Up to complementation: {20-29, 30-39, 40+} with {G1, G2, G3}.
  const std::vector<std::size_t> s_paper{2, 3, 4}, t_paper{1, 2, 3};
  const bool direct = s1.s_opt == s_paper && s1.t_opt == t_paper;
  const bool complemented = s1.s_opt == std::vector<std::size_t>{0, 1} && s1.t_opt == std::vector<std::size_t>{0};
  CHECK((direct || complemented));

  const auto s2 = seriate(d, 1);
  CHECK(std::abs(s2.cut_norm - 0.0533) <= 2e-4);
  for (double b : s2.block_sums) CHECK(std::abs(std::abs(b) - s2.cut_norm) <= 1e-10 * s2.cut_norm);

  // Rows within each v-group in descending f.
  const auto& ax = d.axes[1];
  for (std::size_t k = 1; k < s2.row_order.size(); ++k) {
    const auto prev = s2.row_order[k - 1], cur = s2.row_order[k];
    if (ax.v[prev] == ax.v[cur]) CHECK(ax.f(static_cast<Eigen::Index>(prev)) >= ax.f(static_cast<Eigen::Index>(cur)));
    else CHECK(ax.v[prev] == 1);
  }
}

TEST_CASE("americas second axis contributions") {
  const auto p = dataset("americas");
  const auto labels = tcalib::io::load_dataset("americas");
  const auto d = tca(p, 2);
  const auto rc = rc_axis(d, 1);
  auto row = [&](const std::string& name) {
    const auto it = std::find(labels.row_labels.begin(), labels.row_labels.end(), name);
    REQUIRE(it != labels.row_labels.end());
    return rc.rc_rows[static_cast<std::size_t>(it - labels.row_labels.begin())];
  };
  const auto nafta = std::find(labels.col_labels.begin(), labels.col_labels.end(), "NAFTA");
  REQUIRE(nafta != labels.col_labels.end());
  CHECK(std::abs(row("Canada") - 0.088) <= 5e-3);
  CHECK(std::abs(row("UnitedStates") - 0.088) <= 5e-3);
  CHECK(std::abs(rc.rc_cols[static_cast<std::size_t>(nafta - labels.col_labels.begin())] - 0.10) <= 5e-3);
}

TEST_CASE("zero and rank-one inputs") {
  const ResidualMatrix zero = centered(Matrix::Zero(3, 4));
  const auto e = norm_exact(zero);
  CHECK(e.delta == 0.0);
  CHECK(e.u == SignVector::ones(4));
  CHECK(norm_heuristic(zero).delta == 0.0);
  const auto ser = cut_norm_matrix(zero);
  CHECK(ser.degenerate);
  for (double b : ser.block_sums) CHECK(b == 0.0);
  CHECK_THROWS_WITH_AS(deflate(zero, e), doctest::Contains("cannot deflate null axis"), tcalib::InputError);

  Vector r(3), c(3);
  r << 0.2, 0.3, 0.5;
  c << 0.6, 0.3, 0.1;
  const auto indep = CorrespondenceMatrix::from_counts(r * c.transpose() * 100.0);
  CHECK(tca(indep, 5).axes.empty());

  Vector a(4), b(3);
  a << 1, -2, 0.5, 0.5;
  b << 1, 1, -2;
  const ResidualMatrix rank1 = centered(a * b.transpose());
  const auto axis = norm_exact(rank1);
  CHECK(deflate(rank1, axis).values().cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("sign vector validation") {
  CHECK_THROWS_AS(SignVector({1, 0, -1}), tcalib::InputError);
  Vector x(3);
  x << 0.0, -1e-300, 2.0;
  CHECK(SignVector::of(x) == SignVector({1, -1, 1}));
}

TEST_CASE("budget limits") {
  std::mt19937_64 rng(31);
  const ResidualMatrix big = centered(oracle::random_double_centered(rng, 23, 23));
  CHECK_THROWS_WITH_AS(norm_exact(big), doctest::Contains("use norm_heuristic"), tcalib::BudgetError);
  const auto h = norm(big);
  CHECK_FALSE(h.exact);
  CHECK(h.delta > 0.0);
  // A wide matrix is enumerated on its short side.
  const ResidualMatrix wide = centered(oracle::random_double_centered(rng, 3, 40));
  CHECK(norm(wide).exact);
}

TEST_CASE("exhaustive search does not depend on the worker count") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const ResidualMatrix x = centered(oracle::random_double_centered(rng, 30, 14));
    const auto one = norm_exact(x, 1);
    const auto many = norm_exact(x, 7);
    CHECK(one.delta == many.delta);
    CHECK(one.u == many.u);
    CHECK(one.v == many.v);
  }
}

TEST_CASE("oracle: norm_exact and cut_norm_matrix against brute force") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [n, m] = oracle::random_shape(rng, 12);
    const Matrix xm = oracle::random_double_centered(rng, n, m);
    const ResidualMatrix x = centered(xm);
    const auto ax = norm_exact(x);
    REQUIRE(oracle::rel_close(ax.delta, oracle::taxicab_norm(xm), 1e-12));
    REQUIRE(oracle::rel_close(cut_norm_matrix(x).cut_norm, oracle::cut_norm(xm), 1e-12));
  }
}

TEST_CASE("property: transition formulas and projection identities") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [n, m] = oracle::random_shape(rng, 16);
    const ResidualMatrix x = centered(oracle::random_double_centered(rng, n, m));
    for (const auto& ax : {norm_exact(x), norm_heuristic(x)}) {
      CHECK(ax.v == SignVector::of(x.values() * ax.u.as_vector()));
      CHECK(ax.u == SignVector::of(x.values().transpose() * ax.v.as_vector()));
      CHECK(std::abs(ax.a.sum()) <= 1e-10 * ax.delta);
      CHECK(std::abs(ax.b.sum()) <= 1e-10 * ax.delta);
      CHECK(oracle::rel_close(ax.a.lpNorm<1>(), ax.delta, 1e-10));
      CHECK(oracle::rel_close(ax.b.lpNorm<1>(), ax.delta, 1e-10));
    }
  }
}

TEST_CASE("property: heuristic is monotone and never beats the exhaustive search") {
  std::mt19937_64 rng(35);
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix xm = oracle::random_double_centered(rng, 8, 6);
    const ResidualMatrix x = centered(xm);
    for (Eigen::Index j = 0; j < xm.cols(); ++j) {
      const auto run = alternating_run(xm, SignVector::of(xm.col(j)));
      for (std::size_t k = 1; k < run.deltas.size(); ++k) REQUIRE(run.deltas[k] >= run.deltas[k - 1]);
    }
    const double e = norm_exact(x).delta;
    const double h = norm_heuristic(x).delta;
    REQUIRE(h <= e * (1 + 1e-12));
    if (h >= e * (1 - 1e-12)) ++equal;
  }
  MESSAGE("heuristic reached the exhaustive optimum on " << equal << "/100 random 8x6 matrices");
  CHECK(equal > 0);
}

TEST_CASE("property: deflation keeps centering and drops rank by one") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [n, m] = oracle::random_shape(rng, 14);
    const ResidualMatrix x = centered(oracle::random_double_centered(rng, n, m));
    const auto ax = norm(x);
    const auto next = deflate(x, ax);
    CHECK(next.kind() == ResidualKind::deflated);
    CHECK(next.values().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(next.values().colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(numeric_rank(next.values(), x.values().norm()) == numeric_rank(x.values()) - 1);
  }
}

TEST_CASE("property: full-rank reconstruction, contributions and heavyweight deflation") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [n, m] = oracle::random_shape(rng, 14);
    const auto p = CorrespondenceMatrix::from_counts(oracle::random_counts(rng, n, m));
    const auto d = tca(p, full_rank_axes(p));
    CHECK((reconstruct(d) - p.p()).cwiseAbs().maxCoeff() <= 1e-8);
    for (std::size_t a = 0; a < d.axes.size(); ++a) {
      const auto rc = rc_axis(d, a);
      double sr = 0, sc = 0;
      for (double v : rc.rc_rows) {
        CHECK(v <= 0.5 + 1e-12);
        sr += v;
      }
      for (double v : rc.rc_cols) {
        CHECK(v <= 0.5 + 1e-12);
        sc += v;
      }
      CHECK(sr == Approx(1.0).epsilon(1e-10));
      CHECK(sc == Approx(1.0).epsilon(1e-10));
      if (a + 1 < d.axes.size()) {
        for (std::size_t j : rc.heavyweight_cols)
          CHECK(d.residuals[a + 1].values().col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff() <= 1e-12);
        for (std::size_t i : rc.heavyweight_rows)
          CHECK(d.residuals[a + 1].values().row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff() <= 1e-12);
      }
      for (const auto& cell : rc.heavyweight_cells) CHECK(cell.rc == Approx(0.25));
    }
  }
}

TEST_CASE("property: equivalent partitioning") {
  std::mt19937_64 rng(38);
  std::uniform_int_distribution<int> pick(0, 100);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [n, m] = oracle::random_shape(rng, 12);
    const Matrix counts = oracle::random_counts(rng, n, m);
    const std::size_t split = static_cast<std::size_t>(pick(rng)) % m;
    Matrix cloned(counts.rows(), counts.cols() + 1);
    cloned.leftCols(counts.cols()) = counts;
    cloned.col(static_cast<Eigen::Index>(split)) *= 0.5;
    cloned.col(counts.cols()) = cloned.col(static_cast<Eigen::Index>(split));

    const auto d1 = tca(CorrespondenceMatrix::from_counts(counts), 1);
    const auto d2 = tca(CorrespondenceMatrix::from_counts(cloned), 1);
    REQUIRE(d1.axes.size() == 1);
    REQUIRE(d2.axes.size() == 1);
    const auto& a1 = d1.axes[0];
    const auto& a2 = d2.axes[0];
    CHECK(a1.delta == Approx(a2.delta).epsilon(1e-10));
    const double s = a1.f.dot(a2.f) >= 0 ? 1.0 : -1.0;
    CHECK((a1.f - s * a2.f).cwiseAbs().maxCoeff() <= 1e-8);
    for (Eigen::Index j = 0; j < counts.cols(); ++j) CHECK(std::abs(a1.g(j) - s * a2.g(j)) <= 1e-8);
    CHECK(std::abs(a2.g(static_cast<Eigen::Index>(split)) - a2.g(counts.cols())) <= 1e-8);
  }
}
