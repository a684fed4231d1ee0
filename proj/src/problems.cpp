#include "gpcsg/problems.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gpcsg/errors.hpp"
#include "gpcsg/reference.hpp"

namespace gpcsg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ProblemSetup smooth() {
  ProblemSetup p;
  p.name = "smooth";
  p.dims = 1;
  p.t_final = 0.2;
  p.gamma = {1.4, 0.0};
  p.boundary.x_lo.kind = p.boundary.x_hi.kind = BoundaryKind::periodic;
  p.initial = [](double x, double, double xi) { return exact_smooth(x, 0.0, xi); };
  p.exact = [](double x, double, double t, double xi) { return exact_smooth(x, t, xi); };
  return p;
}

ProblemSetup boundary_driver() {
  ProblemSetup p;
  p.name = "driver";
  p.dims = 1;
  p.x_hi = 5.0;
  p.t_final = 4.0;
  p.gamma = {5.0 / 3.0, 0.0};
  p.boundary.x_lo.kind = BoundaryKind::driver;
  p.boundary.x_hi.kind = BoundaryKind::outflow;
  p.initial = [](double, double, double) { return Primitive{1.0, 0.0, 0.0, 0.6}; };
  p.driver_state = [](double t, double xi) {
    const double w = 1.0 + 0.1 * xi;
    return Primitive{1.0, 0.02 * std::sin(kTwoPi * w * t), 0.0, 0.6};
  };
  return p;
}

ProblemSetup sod() {
  ProblemSetup p;
  p.name = "sod";
  p.dims = 1;
  p.t_final = 0.18;
  p.gamma = {1.4, 0.0};
  p.initial = [](double x, double, double xi) {
    return x < 0.5 + 0.05 * xi ? Primitive{1.0, 0.0, 0.0, 1.0} : Primitive{0.125, 0.0, 0.0, 0.1};
  };
  p.x_breaks = [](double xi) { return std::vector<double>{0.5 + 0.05 * xi}; };
  p.exact = [initial = p.initial](double x, double y, double t, double xi) {
    if (t <= 0.0) return initial(x, y, xi);
    return exact_riemann({1.0, 0.0, 0.0, 1.0}, {0.125, 0.0, 0.0, 0.1}, 1.4, (x - 0.5 - 0.05 * xi) / t);
  };
  return p;
}

// Quadrant data ordered (x>.5,y>.5), (x<.5,y>.5), (x<.5,y<.5), (x>.5,y<.5).
ProblemSetup quadrants(std::string name, std::function<std::array<Primitive, 4>(double xi)> data, GammaLaw gamma) {
  ProblemSetup p;
  p.name = std::move(name);
  p.dims = 2;
  p.t_final = 0.2;
  p.gamma = gamma;
  p.initial = [data = std::move(data)](double x, double y, double xi) {
    const auto q = data(xi);
    if (y >= 0.5) return x >= 0.5 ? q[0] : q[1];
    return x < 0.5 ? q[2] : q[3];
  };
  p.x_breaks = [](double) { return std::vector<double>{0.5}; };
  p.y_breaks = [](double) { return std::vector<double>{0.5}; };
  return p;
}

std::array<Primitive, 4> rarefactions(double v) {
  return {Primitive{1.0, 0.0, 0.0, 1.0}, Primitive{0.5197, v, 0.0, 0.4}, Primitive{1.0, v, v, 1.0},
          Primitive{0.5197, 0.0, v, 0.4}};
}

std::array<Primitive, 4> contacts(double density_scale) {
  std::array<Primitive, 4> q = {Primitive{0.5197, 0.1, 0.1, 0.4}, Primitive{1.0, -0.6259, 0.1, 1.0},
                                Primitive{0.8, 0.1, 0.1, 1.0}, Primitive{1.0, 0.1, -0.6259, 1.0}};
  for (auto& w : q) w.rho *= density_scale;
  return q;
}

ProblemSetup smooth2d() {
  ProblemSetup p;
  p.name = "smooth2d";
  p.dims = 2;
  p.t_final = 0.2;
  p.gamma = {1.4, 0.0};
  p.boundary.x_lo.kind = p.boundary.x_hi.kind = BoundaryKind::periodic;
  p.boundary.y_lo.kind = p.boundary.y_hi.kind = BoundaryKind::periodic;
  p.exact = [](double x, double y, double t, double xi) {
    const double u = 0.8 + 0.2 * xi;
    const double v = 0.4;
    return Primitive{1.0 + 0.2 * std::sin(kTwoPi * (x + y - (u + v) * t)), u, v, 1.0};
  };
  p.initial = [exact = p.exact](double x, double y, double xi) { return exact(x, y, 0.0, xi); };
  return p;
}

}  // namespace

Primitive exact_smooth(double x, double t, double xi) {
  const double u = 0.8 + 0.2 * xi;
  return Primitive{1.0 + 0.2 * std::sin(kTwoPi * (x - u * t)), u, 0.0, 1.0};
}

std::vector<std::string> builtin_problem_names() {
  return {"smooth", "driver", "sod", "rp1_velocity", "rp1_gamma", "rp2_density", "rp2_gamma", "smooth2d"};
}

ProblemSetup builtin_problem(const std::string& name) {
  if (name == "smooth") return smooth();
  if (name == "driver") return boundary_driver();
  if (name == "sod") return sod();
  if (name == "rp1_velocity") {
    return quadrants(name, [](double xi) { return rarefactions(-0.7259 + 0.1 * xi); }, {1.4, 0.0});
  }
  if (name == "rp1_gamma") {
    return quadrants(name, [](double) { return rarefactions(-0.7259); }, {1.4, 0.1});
  }
  if (name == "rp2_density") {
    return quadrants(name, [](double xi) { return contacts(1.0 + 0.1 * xi); }, {1.4, 0.0});
  }
  if (name == "rp2_gamma") {
    return quadrants(name, [](double) { return contacts(1.0); }, {1.4, 0.1});
  }
  if (name == "smooth2d") return smooth2d();
  throw ConfigError("unknown problem '" + name + "'");
}

}  // namespace gpcsg
