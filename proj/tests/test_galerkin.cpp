#include <cmath>
#include <memory>
#include <random>

#include <doctest.h>

#include "gpcsg/driver.hpp"
#include "gpcsg/fv_scheme.hpp"
#include "gpcsg/errors.hpp"
#include "gpcsg/galerkin.hpp"
#include "test_util.hpp"

using namespace gpcsg;

namespace {

std::shared_ptr<EulerModel> euler(int dims, GammaLaw g = {}) { return std::make_shared<EulerModel>(dims, g); }

GpcState constant_state(const GalerkinSystem& sys, const Eigen::VectorXd& u) {
  GpcState s(sys.modes(), sys.vars());
  s.mode(0) = u;
  return s;
}

// Dense oracle: direct sum of phi_i phi_j A_k over a 64-point rule.
GalerkinMatrices oracle_blocks(const EulerModel& m, const GpcState& st, int order) {
  OrthonormalBasis b(order);
  const auto rule = gauss_rule(64);
  const int n = m.vars(), dim = (order + 1) * n;
  GalerkinMatrices out{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim)};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double xi = rule.nodes[q];
    const auto s = m.symmetrizers(gpc_eval(st, b, xi), xi);
    for (int i = 0; i <= order; ++i)
      for (int j = 0; j <= order; ++j) {
        const double c = rule.weights[q] * b.eval(i, xi) * b.eval(j, xi);
        out.a0_hat.block(i * n, j * n, n, n) += c * s.a0;
        out.a1_hat.block(i * n, j * n, n, n) += c * s.a1;
      }
  }
  return out;
}

}  // namespace

TEST_CASE("constant state assembles block-diagonal") {
  auto m = euler(1);
  GalerkinSystem sys(m, 3);
  const auto u = m->conserved({0.8, 0.3, 0.0, 1.2}, 0.0);
  const auto g = sys.assemble(constant_state(sys, u));
  const auto s = m->symmetrizers(u, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Eigen::MatrixXd b0 = g.a0_hat.block(i * 3, j * 3, 3, 3), b1 = g.a1_hat.block(i * 3, j * 3, 3, 3);
      if (i == j) {
        CHECK((b0 - s.a0).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK((b1 - s.a1).cwiseAbs().maxCoeff() <= 1e-13);
      } else {
        CHECK(b0.cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(b1.cwiseAbs().maxCoeff() <= 1e-13);
      }
    }
  // left = right: B_psi block-diagonal with the Jacobian, eigenvalues with multiplicity M+1
  const auto st = constant_state(sys, u);
  const Eigen::MatrixXd bpsi = sys.path_matrix(st, st);
  const Eigen::MatrixXd a = testutil::fd_jacobian(*m, u, 0.0, Axis::x);
  for (int i = 0; i < 4; ++i) CHECK((bpsi.block(i * 3, i * 3, 3, 3) - a).cwiseAbs().maxCoeff() <= 1e-6);
  Eigen::VectorXd lam = Eigen::EigenSolver<Eigen::MatrixXd>(bpsi, false).eigenvalues().real();
  std::sort(lam.data(), lam.data() + lam.size());
  const auto ev = m->eigen(u, 0.0).eigenvalues;
  for (int k = 0; k < 12; ++k) CHECK(lam[k] == doctest::Approx(ev[k / 4]).epsilon(1e-8));
}

TEST_CASE("assembly matches a 64-node dense quadrature") {
  auto m = euler(1, {1.4, 0.1});
  GalerkinSystem sys(m, 1, {.xi_nodes = 64});
  GpcState st(2, 3);
  st.mode(0) = m->conserved({1.0, 0.2, 0.0, 1.0}, 0.0);
  st(1, 0) = 0.05;
  st(1, 2) = 0.03;
  const auto g = sys.assemble(st);
  const auto o = oracle_blocks(*m, st, 1);
  CHECK((g.a0_hat - o.a0_hat).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((g.a1_hat - o.a1_hat).cwiseAbs().maxCoeff() <= 1e-10);

  // default node count is already converged for smooth xi dependence
  GalerkinSystem coarse(m, 1);
  const auto gc = coarse.assemble(st);
  CHECK((gc.a0_hat - o.a0_hat).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("quadrature convergence of the assembly") {
  auto m = euler(2, {1.4, 0.1});
  std::mt19937_64 rng(5);
  for (int order : {2, 4}) {
    GalerkinSystem ref(m, order, {.xi_nodes = 80});
    for (int trial = 0; trial < 5; ++trial) {
      const auto st = testutil::random_gpc_state(ref, *m, rng, 0.1);
      const auto gr = ref.assemble(st);
      GalerkinSystem n1(m, order, {.xi_nodes = 20}), n2(m, order, {.xi_nodes = 40});
      const auto g1 = n1.assemble(st), g2 = n2.assemble(st);
      CHECK((g1.a0_hat - g2.a0_hat).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((g1.a1_hat - g2.a1_hat).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((g2.a1_hat - gr.a1_hat).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("symmetric hyperbolicity of random Galerkin systems") {
  auto m = euler(1, {1.4, 0.1});
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int order = 1 + trial % 5;
    GalerkinSystem sys(m, order);
    const auto st = testutil::random_gpc_state(sys, *m, rng);
    const auto g = sys.assemble(st);
    CHECK((g.a0_hat - g.a0_hat.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((g.a1_hat - g.a1_hat.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::LLT<Eigen::MatrixXd> llt(g.a0_hat);
    REQUIRE(llt.info() == Eigen::Success);
    const Eigen::MatrixXd b = llt.solve(g.a1_hat);
    const double rho = testutil::spectral_radius(b);
    CHECK(testutil::max_imag(b) <= 1e-8 * rho);

    // the lifted B agrees with apply_b
    auto ws = sys.make_workspace();
    Eigen::VectorXd v = Eigen::VectorXd::Random(sys.size()), out(sys.size());
    sys.apply_b(std::span<const double>(st.flat().data(), sys.size()), std::span<const double>(v.data(), v.size()),
                Axis::x, std::span<double>(out.data(), out.size()), ws);
    CHECK((out - b * v).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + (b * v).cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("alpha bound examples") {
  auto m = euler(1);
  GalerkinSystem sys(m, 2);
  const auto rest = constant_state(sys, m->conserved({1.0, 0.0, 0.0, 1.0}, 0.0));
  CHECK(sys.alpha_bound(rest, rest) == doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
  // u = 10, c = 1: rho = 1, p = 1/1.4
  const auto fast = constant_state(sys, m->conserved({1.0, 10.0, 0.0, 1.0 / 1.4}, 0.0));
  CHECK(sys.alpha_bound(fast, fast) == doctest::Approx(11.0).epsilon(1e-14));
}

TEST_CASE("alpha bound dominates the path matrix spectrum") {
  auto m = euler(1, {1.4, 0.1});
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    GalerkinSystem sys(m, 1 + trial % 4);
    const auto l = testutil::random_gpc_state(sys, *m, rng);
    const auto r = testutil::random_gpc_state(sys, *m, rng);
    const double alpha = sys.alpha_bound(l, r);
    const double rho = testutil::spectral_radius(sys.path_matrix(l, r));
    CHECK(alpha >= rho * (1.0 - 1e-10));
    CHECK(testutil::max_imag(sys.path_matrix(l, r)) <= 1e-8 * rho);
  }
}

TEST_CASE("lax-friedrichs splitting") {
  const auto z = lf_split(Eigen::MatrixXd::Zero(4, 4), 1.0);
  CHECK((z.b_plus - 0.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((z.b_minus + 0.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Random(6, 6);
  const auto s = lf_split(b, 2.5);
  CHECK((s.b_plus + s.b_minus - b).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((s.b_plus - s.b_minus - 2.5 * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(lf_split(b, -1.0), ConfigError);

  // alpha A0 +- A1 (path-averaged) positive semi-definite
  auto m = euler(1, {1.4, 0.1});
  std::mt19937_64 rng(3);
  GalerkinSystem sys(m, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto l = testutil::random_gpc_state(sys, *m, rng);
    const auto r = testutil::random_gpc_state(sys, *m, rng);
    const auto avg = sys.path_averaged(l, r);
    const double alpha = sys.alpha_bound(l, r);
    const double scale = avg.a0_hat.norm() * alpha;
    for (double sign : {-1.0, 1.0}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(alpha * avg.a0_hat + sign * avg.a1_hat, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-9 * scale);
    }
  }

  // fluctuations agree with the dense split applied to the jump
  const auto l = testutil::random_gpc_state(sys, *m, rng);
  const auto r = testutil::random_gpc_state(sys, *m, rng);
  auto ws = sys.make_workspace();
  Eigen::VectorXd bm(sys.size()), bp(sys.size());
  const double used = sys.fluctuations(std::span<const double>(l.flat().data(), sys.size()),
                                       std::span<const double>(r.flat().data(), sys.size()), Axis::x,
                                       std::span<double>(bm.data(), bm.size()), std::span<double>(bp.data(), bp.size()), ws);
  CHECK(used == doctest::Approx(1.05 * sys.alpha_bound(l, r)).epsilon(1e-14));
  const auto dense = lf_split(sys.path_matrix(l, r), used);
  const Eigen::VectorXd jump = r.flat() - l.flat();
  CHECK((dense.b_minus * jump - bm).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((dense.b_plus * jump - bp).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("lifted admissibility") {
  auto m = euler(1);
  GalerkinSystem sys(m, 2);
  auto st = constant_state(sys, m->conserved({1.0, 0.0, 0.0, 1.0}, 0.0));
  CHECK(sys.check_admissible(st));
  st(1, 0) = 2.0;
  const auto chk = sys.check_admissible(st);
  CHECK_FALSE(chk);
  CHECK(chk.witness < -0.2);  // 1 + 2 sqrt3 xi < 0 for xi < -0.2887
  CHECK(1.0 + 2.0 * std::sqrt(3.0) * chk.witness <= 0.0);
  CHECK_THROWS_AS(sys.assemble(st), InadmissibleState);
  try {
    sys.assemble(st);
  } catch (const InadmissibleState& e) {
    CHECK(e.xi() < -0.2);
  }
}

TEST_CASE("sod projection with M = 8 and the cell-average limiter") {
  const auto problem = builtin_problem("sod");
  auto m = std::make_shared<EulerModel>(problem.model());
  GalerkinSystem sys(m, 8);
  const Mesh1D mesh{200, 0.0, 1.0};
  auto field = project_initial_1d(problem, sys, mesh, 64);
  // The xi-profile of a cell average near the interface is a ramp; its
  // degree-8 projection overshoots below zero density at xi = -1 in a few
  // cells (e.g. cell 95: about -0.0667). Away from the interface band the
  // projection is a constant state.
  int outside = 0;
  for (int j = 0; j < mesh.cells; ++j) {
    const bool in_band = mesh.face(j + 1) > 0.45 && mesh.face(j) < 0.55;
    const auto chk = sys.check_admissible(field.cell(j));
    if (!in_band) CHECK(chk);
    if (!chk) ++outside;
  }
  CHECK(outside > 0);
  CHECK(outside <= 10);
  for (int j = 0; j < mesh.cells; ++j) {
    const std::vector<double> before(field.cell(j).begin(), field.cell(j).end());
    const double theta = limit_cell_average(sys, field.cell(j));
    CHECK(theta > 0.0);
    CHECK(sys.check_admissible(field.cell(j)));
    for (int v = 0; v < 3; ++v) CHECK(field.cell(j)[v] == before[v]);
  }
}
