#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fxcov/fdata.hpp"

using namespace fxcov;
using Catch::Approx;

namespace {

FunctionalSeries series_from(const Grid& g,
                             std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), g.size());
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return FunctionalSeries(g, m);
}

}

TEST_CASE("grid points and weights") {
  Grid g(4);
  REQUIRE(g.size() == 4);
  REQUIRE(g.weight() == Approx(0.25));
  REQUIRE(g.point(0) == Approx(0.25));
  REQUIRE(g.point(3) == Approx(1.0));
  const Eigen::VectorXd p = g.points();
  for (int j = 1; j < 4; ++j) REQUIRE(p[j] > p[j - 1]);
  REQUIRE(p[0] > 0.0);
  REQUIRE(p[3] == 1.0);
  REQUIRE_THROWS_AS(Grid(0), std::invalid_argument);
  REQUIRE_THROWS_AS(Grid(-3), std::invalid_argument);

  // Quadrature of the constant-1 function is exactly 1.
  Grid g100(100);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(100);
  REQUIRE(inner_product_1d(ones, ones, g100) == 1.0);
}

TEST_CASE("inner_product_1d") {
  Grid g(100);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(100);

  SECTION("identity function against ones") {
    // Closed form: (1/R) sum j/R = (R+1)/(2R) = 0.505 at R = 100.
    const double expected = 101.0 / 200.0;
    REQUIRE(inner_product_1d(g.points(), ones, g) == Approx(expected).epsilon(1e-14));
    REQUIRE(expected == 0.505);
  }
  SECTION("alternating signs cancel") {
    Grid g4(4);
    Eigen::VectorXd f(4);
    f << 1, -1, 1, -1;
    REQUIRE(inner_product_1d(f, Eigen::VectorXd::Ones(4), g4) == 0.0);
  }
  SECTION("length mismatch rejected") {
    REQUIRE_THROWS_AS(inner_product_1d(ones, Eigen::VectorXd::Ones(7), g),
                      ConformabilityError);
  }
  SECTION("linearity") {
    std::mt19937 rng(42);
    std::normal_distribution<double> n;
    Eigen::VectorXd f(100), h(100), k(100);
    for (int j = 0; j < 100; ++j) {
      f[j] = n(rng);
      h[j] = n(rng);
      k[j] = n(rng);
    }
    const double lhs = inner_product_1d(2.0 * f + 3.0 * h, k, g);
    const double rhs = 2.0 * inner_product_1d(f, k, g) + 3.0 * inner_product_1d(h, k, g);
    REQUIRE(lhs == Approx(rhs).margin(1e-12));
  }
}

TEST_CASE("inner_product_2d and norm") {
  Grid g(100);
  const Surface ones(g, Eigen::MatrixXd::Ones(100, 100));
  const Surface zero = Surface::zero(g);

  REQUIRE(inner_product_2d(ones, ones) == Approx(1.0).epsilon(1e-14));
  REQUIRE(inner_product_2d(zero, ones) == 0.0);

  SECTION("product surface against ones") {
    // F(t,s) = t s integrates to ((R+1)/(2R))^2 = 0.255025.
    Eigen::MatrixXd f = g.points() * g.points().transpose();
    REQUIRE(inner_product_2d(Surface(g, f), ones) ==
            Approx(0.255025).epsilon(1e-12));
  }
  SECTION("norm of the all-ones surface") {
    REQUIRE(norm_2d(ones) == Approx(1.0).epsilon(1e-14));
  }
  SECTION("cauchy-schwarz") {
    std::mt19937 rng(7);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXd a(100, 100), b(100, 100);
      for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
          a(i, j) = n(rng);
          b(i, j) = n(rng);
        }
      Surface fa(g, a), fb(g, b);
      const double ip = inner_product_2d(fa, fb);
      REQUIRE(ip * ip <=
              inner_product_2d(fa, fa) * inner_product_2d(fb, fb) * (1 + 1e-12));
    }
  }
  SECTION("grid mismatch rejected") {
    Grid g2(50);
    REQUIRE_THROWS_AS(
        inner_product_2d(ones, Surface(g2, Eigen::MatrixXd::Ones(50, 50))),
        ConformabilityError);
  }
}

TEST_CASE("functional series validation") {
  Grid g(3);
  Eigen::MatrixXd bad(2, 3);
  bad << 1, 2, 3, 4, std::numeric_limits<double>::quiet_NaN(), 6;
  REQUIRE_THROWS_AS(FunctionalSeries(g, bad), std::invalid_argument);
  REQUIRE_THROWS_AS(FunctionalSeries(g, Eigen::MatrixXd::Ones(2, 4)),
                    ConformabilityError);
  REQUIRE_THROWS_AS(Surface(g, Eigen::MatrixXd::Ones(3, 2)),
                    ConformabilityError);
}

TEST_CASE("mean_curve") {
  Grid g(3);
  SECTION("single constant row") {
    const auto s = series_from(g, {{5.0, 5.0, 5.0}});
    REQUIRE(mean_curve(s).isApproxToConstant(5.0));
  }
  SECTION("symmetric rows cancel") {
    const auto s = series_from(g, {{1, 1, 1}, {-1, -1, -1}});
    REQUIRE(mean_curve(s).norm() == 0.0);
  }
  SECTION("columnwise arithmetic mean") {
    const auto s = series_from(g, {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
    REQUIRE(mean_curve(s)[0] == Approx(2.0));
  }
}

TEST_CASE("cidr_transform") {
  Grid g(3);
  SECTION("constant price path maps to zero") {
    const auto prices = series_from(g, {{100, 100, 100}});
    REQUIRE(cidr_transform(prices).values().norm() == 0.0);
  }
  SECTION("log identity") {
    const double up = 100.0 * std::exp(0.01);
    const auto prices = series_from(g, {{100.0, up, up}});
    const auto r = cidr_transform(prices);
    REQUIRE(r.values()(0, 0) == 0.0);
    REQUIRE(r.values()(0, 1) == Approx(1.0).epsilon(1e-12));
    REQUIRE(r.values()(0, 2) == Approx(1.0).epsilon(1e-12));
  }
  SECTION("zero price rejected with coordinates") {
    const auto prices = series_from(g, {{100, 100, 100}, {100, 0.0, 100}});
    try {
      cidr_transform(prices);
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      REQUIRE(msg.find("curve 2") != std::string::npos);
      REQUIRE(msg.find("point 2") != std::string::npos);
    }
  }
  SECTION("scale invariance per row") {
    const auto prices = series_from(g, {{90, 95, 105}, {40, 42, 41}});
    Eigen::MatrixXd scaled = prices.values();
    scaled.row(1) *= 3.7;
    const auto a = cidr_transform(prices);
    const auto b = cidr_transform(FunctionalSeries(g, scaled));
    REQUIRE(a.values().isApprox(b.values(), 1e-12));
  }
  SECTION("first column exactly zero") {
    const auto prices = series_from(g, {{90.5, 95, 105}, {40.1, 42, 41}});
    const auto r = cidr_transform(prices);
    REQUIRE(r.values()(0, 0) == 0.0);
    REQUIRE(r.values()(1, 0) == 0.0);
  }
}

TEST_CASE("apply_lag") {
  Grid g(2);
  Eigen::MatrixXd xv(5, 2), yv(5, 2);
  for (int i = 0; i < 5; ++i) {
    xv.row(i) << i + 1, 10 * (i + 1);
    yv.row(i) << -(i + 1), 100 * (i + 1);
  }
  FunctionalSeries x(g, xv), y(g, yv);

  SECTION("lag zero is the identity pairing") {
    const auto b = apply_lag(x, y, 0);
    REQUIRE(b.length() == 5);
    REQUIRE(b.lag() == 0);
    REQUIRE(b.x().values() == xv);
    REQUIRE(b.y().values() == yv);
  }
  SECTION("lag two pairs x rows 3..5 with y rows 1..3") {
    const auto b = apply_lag(x, y, 2);
    REQUIRE(b.length() == 3);
    REQUIRE(b.lag() == 2);
    REQUIRE(b.x().values() == xv.bottomRows(3));
    REQUIRE(b.y().values() == yv.topRows(3));
  }
  SECTION("lag T-1 leaves too little data") {
    REQUIRE_THROWS_AS(apply_lag(x, y, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_lag(x, y, -1), std::invalid_argument);
  }
  SECTION("mismatched series rejected") {
    FunctionalSeries shorter(g, xv.topRows(4));
    REQUIRE_THROWS_AS(apply_lag(x, shorter, 0), ConformabilityError);
    Grid g3(3);
    FunctionalSeries other(g3, Eigen::MatrixXd::Ones(5, 3));
    REQUIRE_THROWS_AS(apply_lag(x, other, 0), ConformabilityError);
  }
}
