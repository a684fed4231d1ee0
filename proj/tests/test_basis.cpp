#include <cmath>
#include <random>

#include <doctest.h>

#include "gpcsg/basis.hpp"
#include "gpcsg/errors.hpp"

using namespace gpcsg;

TEST_CASE("basis values") {
  OrthonormalBasis b(4);
  CHECK(b.eval(0, 0.37) == 1.0);
  CHECK(b.eval(1, 0.5) == doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-15));
  // phi_2 = sqrt5 (3x^2 - 1)/2 from Gram-Schmidt on 1, x, x^2 under dx/2
  CHECK(b.eval(2, 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(b.eval(2, 0.3) == doctest::Approx(std::sqrt(5.0) * (3 * 0.09 - 1) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(b.eval(5, 0.0), DomainError);
  CHECK_THROWS_AS(b.eval(-1, 0.0), DomainError);
  CHECK_THROWS_AS(b.eval(1, 1.5), DomainError);
}

TEST_CASE("gauss rule examples") {
  auto r1 = gauss_rule(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  auto r2 = gauss_rule(2);
  double s = 0.0;
  for (std::size_t q = 0; q < 2; ++q) s += r2.weights[q] * r2.nodes[q] * r2.nodes[q];
  CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  auto r5 = gauss_rule(5);
  s = 0.0;
  for (std::size_t q = 0; q < 5; ++q) s += r5.weights[q] * std::pow(r5.nodes[q], 8);
  CHECK(s == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_rule(0), ConfigError);
}

TEST_CASE("gauss rule exactness for all monomials up to 2n-1") {
  for (int n = 1; n <= 40; ++n) {
    const auto r = gauss_rule(n);
    double wsum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-13);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.nodes[q], k);
      const double exact = k % 2 == 1 ? 0.0 : 1.0 / (k + 1);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
}

TEST_CASE("gauss lobatto rules") {
  const auto r = gauss_lobatto_rule(4);
  REQUIRE(r.size() == 4);
  CHECK(r.nodes[0] == -1.0);
  CHECK(r.nodes[3] == 1.0);
  CHECK(r.nodes[1] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(r.nodes[2] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  for (int q = 3; q <= 8; ++q) {
    const auto l = gauss_lobatto_rule(q);
    for (int k = 0; k <= 2 * q - 3; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < l.size(); ++i) s += l.weights[i] * std::pow(l.nodes[i], k);
      CHECK(std::abs(s - (k % 2 ? 0.0 : 1.0 / (k + 1))) <= 1e-13);
    }
  }
}

TEST_CASE("orthonormality up to order 10") {
  for (int m = 0; m <= 10; ++m) {
    OrthonormalBasis b(m);
    const auto r = gauss_rule(m + 1);
    const auto phi = b.tabulate(r.nodes);
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * phi[q * (m + 1) + i] * phi[q * (m + 1) + j];
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("gpc_eval examples") {
  OrthonormalBasis b(3);
  GpcState c(4, 3);
  c.mode(0) << 1.0, 0.0, 2.5;
  for (double xi : {-1.0, -0.2, 0.7}) {
    const auto u = gpc_eval(c, b, xi);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 0.0);
    CHECK(u[2] == 2.5);
  }
  GpcState d(4, 3);
  d(0, 0) = 1.0;
  d(1, 0) = 0.2;
  CHECK(gpc_eval(d, b, 0.0)[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gpc_eval(d, b, 1.0)[0] == doctest::Approx(1.0 + 0.2 * std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(gpc_eval(d, b, 1.01), DomainError);
}

TEST_CASE("mean_std, Parseval and linearity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  GpcState c(5, 3);
  c.mode(0) << 1.0, 0.0, 2.5;
  auto ms = mean_std(c);
  CHECK(ms.mean[2] == 2.5);
  CHECK(ms.std.maxCoeff() == 0.0);
  c(1, 0) = 0.2;
  CHECK(mean_std(c).std[0] == doctest::Approx(0.2).epsilon(1e-15));

  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 6;
    OrthonormalBasis b(m);
    GpcState x(m + 1, 3), y(m + 1, 3);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      x.flat()[k] = U(rng);
      y.flat()[k] = U(rng);
    }
    const auto r = gauss_rule(m + 1);  // degree 2m+1 >= 2m
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(3), var = Eigen::VectorXd::Zero(3);
    const auto st = mean_std(x);
    for (std::size_t q = 0; q < r.size(); ++q) {
      const auto u = gpc_eval(x, b, r.nodes[q]);
      sq += r.weights[q] * u.cwiseAbs2();
      var += r.weights[q] * (u - st.mean).cwiseAbs2();
    }
    for (int v = 0; v < 3; ++v) {
      double parseval = 0.0;
      for (int i = 0; i <= m; ++i) parseval += x(i, v) * x(i, v);
      CHECK(std::abs(sq[v] - parseval) <= 1e-12);
      CHECK(std::abs(var[v] - st.std[v] * st.std[v]) <= 1e-12);
    }
    const double a = U(rng), bb = U(rng), xi = U(rng);
    GpcState z(m + 1, 3, a * x.flat() + bb * y.flat());
    const Eigen::VectorXd lhs = gpc_eval(z, b, xi);
    const Eigen::VectorXd rhs = a * gpc_eval(x, b, xi) + bb * gpc_eval(y, b, xi);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("projection reproduces polynomials") {
  OrthonormalBasis b(3);
  const auto r = gauss_rule(8);
  const auto c = project(b, r, 1, [](double xi) {
    Eigen::VectorXd v(1);
    v[0] = 2.0 + xi - 0.5 * xi * xi * xi;
    return v;
  });
  for (double xi : {-1.0, -0.3, 0.4, 1.0}) {
    CHECK(gpc_eval(c, b, xi)[0] == doctest::Approx(2.0 + xi - 0.5 * xi * xi * xi).epsilon(1e-13));
  }
}
