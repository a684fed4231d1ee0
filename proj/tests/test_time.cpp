#include <cmath>
#include <memory>
#include <vector>

#include <doctest.h>

#include "gpcsg/driver.hpp"
#include "gpcsg/errors.hpp"
#include "gpcsg/time_integration.hpp"

using namespace gpcsg;

namespace {

// du/dt = lambda u on every stored scalar.
struct LinearOde final : SemiDiscreteOperator {
  double lambda = -1.0;
  void prepare(CellField&, double) const override {}
  double evaluate(const CellField& u, double, CellField& rate) const override {
    for (std::size_t k = 0; k < u.data().size(); ++k) rate.data()[k] = lambda * u.data()[k];
    return 0.0;
  }
  double max_alpha(const CellField&, double) const override { return 1.0; }
  double dx() const override { return 0.1; }
};

// Scalar advection u_t + a u_x = 0 with constant speed; every xi-mode is
// advected with the same speed, so the lifted B is a I.
class Advection final : public HyperbolicModel {
 public:
  explicit Advection(double a) : a_(a) {}
  int vars() const noexcept override { return 1; }
  int dims() const noexcept override { return 1; }
  bool is_admissible(std::span<const double> u, double) const noexcept override { return std::isfinite(u[0]); }
  void flux(std::span<const double> u, double, Axis, std::span<double> f) const override { f[0] = a_ * u[0]; }
  double max_speed(std::span<const double>, double, Axis) const override { return std::abs(a_); }
  void eigen(std::span<const double>, double, Axis, std::span<double> lambda, std::span<double> left) const override {
    lambda[0] = a_;
    left[0] = 1.0;
  }

 private:
  double a_;
};

}  // namespace

TEST_CASE("compute_dt examples") {
  StepController c;
  c.cfl = 0.6;
  c.t_final = 1.0;
  CHECK(compute_dt(2.0, 0.01, c, 0.0) == doctest::Approx(0.003).epsilon(1e-15));
  CHECK(compute_dt(2.0, 0.01, c, 0.999) == doctest::Approx(0.001).epsilon(1e-12));
  c.dt_override = [](double dx) { return std::pow(dx, 5.0 / 3.0); };
  CHECK(compute_dt(123.0, 1.0 / 20, c, 0.0) == doctest::Approx(std::pow(1.0 / 20, 5.0 / 3.0)).epsilon(1e-15));
  StepController z;
  z.t_final = 1.0;
  z.dt_max = 0.25;
  CHECK(compute_dt(0.0, 0.1, z, 0.0) == 0.25);
  CHECK(compute_dt(0.0, 0.1, z, 0.9) == doctest::Approx(0.1).epsilon(1e-14));
  StepController bad;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(compute_dt(1.0, 0.1, bad, 0.0), ConfigError);
}

TEST_CASE("rk3 identities") {
  LinearOde zero;
  zero.lambda = 0.0;
  CellField u(4, 3);
  for (std::size_t k = 0; k < u.data().size(); ++k) u.data()[k] = 0.1 * k - 0.37;
  const auto before = u.data();
  rk3_step(u, 0.0, 0.5, zero);
  CHECK(u.data() == before);
  LinearOde ode;
  rk3_step(u, 0.0, 0.0, ode);
  CHECK(u.data() == before);
}

TEST_CASE("rk3 on the exponential test equation") {
  LinearOde ode;
  CellField u(1, 1);
  std::fill(u.data().begin(), u.data().end(), 1.0);
  rk3_step(u, 0.0, 0.01, ode);
  CHECK(std::abs(u.cell(0)[0] - std::exp(-0.01)) <= 5e-9);
  // local error is O(dt^4): 1 - dt + dt^2/2 - dt^3/6 exactly
  CHECK(std::abs(u.cell(0)[0] - (1 - 0.01 + 0.00005 - 1e-6 / 6)) <= 2.3e-16);
  // negative steps integrate backwards
  std::fill(u.data().begin(), u.data().end(), 1.0);
  StepController c;
  c.dt_override = [](double) { return 1e-3; };
  advance(u, 0.0, -0.1, ode, c);
  CHECK(std::abs(u.cell(0)[0] - std::exp(0.1)) <= 1e-9);
}

TEST_CASE("global order of rk3 on the test equation") {
  LinearOde ode;
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) {
    CellField u(1, 1);
    std::fill(u.data().begin(), u.data().end(), 1.0);
    StepController c;
    c.dt_override = [dt](double) { return dt; };
    advance(u, 0.0, 1.0, ode, c);
    err.push_back(std::abs(u.cell(0)[0] - std::exp(-1.0)));
  }
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("linear advection is max-norm stable at cfl 0.6") {
  auto model = std::make_shared<Advection>(1.0);
  GalerkinSystem sys(model, 2);
  const Mesh1D mesh{50, 0.0, 1.0};
  FvScheme scheme(sys, mesh, {BoundaryKind::periodic, BoundaryKind::periodic, {}, {}});
  CellField u(mesh.cells, sys.size());
  for (int j = 0; j < mesh.cells; ++j) {
    const double x = mesh.center(j);
    u.cell(j)[0] = std::sin(2 * M_PI * x);
    u.cell(j)[1] = 0.3 * std::cos(2 * M_PI * x);
    u.cell(j)[2] = 0.1 * std::sin(4 * M_PI * x);
  }
  auto maxnorm = [&] {
    double m = 0.0;
    for (int j = 0; j < mesh.cells; ++j)
      for (double v : u.cell(j)) m = std::max(m, std::abs(v));
    return m;
  };
  const double initial = maxnorm();
  double worst = 0.0;
  for (int step = 0; step < 1000; ++step) {
    scheme.prepare(u, 0.0);
    const double dt = 0.6 * mesh.dx() / scheme.max_alpha(u, 0.0);
    rk3_step(u, 0.0, dt, scheme);
    worst = std::max(worst, maxnorm());
  }
  CHECK(worst <= initial * (1.0 + 1e-10));
}

TEST_CASE("rk3 temporal self-convergence on the smooth problem") {
  const auto problem = builtin_problem("smooth");
  auto m = std::make_shared<EulerModel>(problem.model());
  GalerkinSystem sys(m, 2);
  const Mesh1D mesh{80, 0.0, 1.0};
  FvScheme scheme(sys, mesh, {BoundaryKind::periodic, BoundaryKind::periodic, {}, {}});
  const auto initial = project_initial_1d(problem, sys, mesh, 20);
  std::vector<std::vector<double>> runs;
  const double dt0 = 0.8 * mesh.dx() / 1.45;
  for (int k = 0; k < 4; ++k) {
    auto u = initial;
    StepController c;
    const double dt = dt0 / (1 << k);
    c.dt_override = [dt](double) { return dt; };
    advance(u, 0.0, 0.1, scheme, c);
    runs.emplace_back(u.cell(0).data(), u.cell(0).data() + mesh.cells * sys.size());  // interior only
  }
  auto diff = [&](int a, int b) {
    double s = 0.0;
    for (std::size_t k = 0; k < runs[a].size(); ++k) s = std::max(s, std::abs(runs[a][k] - runs[b][k]));
    return s;
  };
  const double o1 = std::log2(diff(0, 1) / diff(1, 2)), o2 = std::log2(diff(1, 2) / diff(2, 3));
  MESSAGE("temporal orders " << o1 << " " << o2 << " diffs " << diff(0, 1) << " " << diff(1, 2) << " " << diff(2, 3));
  CHECK(o2 >= 2.8);
}
