#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qflk/certify.hpp"
#include "qflk/recipes.hpp"
#include "qflk/spectral.hpp"

using namespace qflk;
using certify::USpec;

TEST_CASE("manufactured reference transports mass and tracks the density") {
  TorusGrid g(1, 64);
  Params p;
  solver::SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  ScalarField R0 = sample(g, [](const std::array<double, 3>& x) { return 1.0 + 0.3 * std::cos(x[0]); });
  USpec u = USpec::traveling(0.2, 1, 1.0);
  auto refs = certify::manufactured_reference(u, R0, p, cfg, functionals::ErrorFieldMode::elk);
  REQUIRE(refs.size() == 101);
  double m0 = spectral::integrate(refs.front().R);
  for (const auto& ref : refs) {
    CHECK(std::fabs(spectral::integrate(ref.R) - m0) / m0 < 1e-12);
    CHECK(ref.R.min() > 0.0);
  }
  CHECK(refs.back().time == doctest::Approx(0.1));
}

TEST_CASE("zero reference on uniform density has no error field") {
  TorusGrid g(1, 32);
  Params p;
  solver::SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.05;
  auto refs = certify::manufactured_reference(USpec::zero(), ScalarField(g, 1.0), p, cfg,
                                              functionals::ErrorFieldMode::elk);
  for (const auto& ref : refs) CHECK(ref.Escript.max_abs() < 1e-12);
}

TEST_CASE("estimate_C is positive and increases with the norms") {
  TorusGrid g(1, 32);
  Params p;
  solver::SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.05;
  auto small = certify::manufactured_reference(USpec::traveling(0.1, 1, 1.0), ScalarField(g, 1.0),
                                               p, cfg, functionals::ErrorFieldMode::elk);
  auto large = certify::manufactured_reference(USpec::traveling(0.5, 2, 1.0), ScalarField(g, 1.0),
                                               p, cfg, functionals::ErrorFieldMode::elk);
  double c1 = certify::estimate_C(small, p);
  double c2 = certify::estimate_C(large, p);
  CHECK(c1 > 0.0);
  CHECK(c2 > c1);
}

TEST_CASE("gronwall certificate accepts exact exponential growth") {
  std::vector<double> times, lhs, b;
  double C = 2.0;
  for (int i = 0; i <= 50; ++i) {
    double t = 0.01 * i;
    times.push_back(t);
    lhs.push_back(0.3 * std::exp(C * t));
    b.push_back(0.0);
  }
  certify::Certificate cert = certify::gronwall_certificate(times, lhs, b, C, 1e-10);
  CHECK(cert.passed);
  CHECK(cert.margin == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("gronwall certificate rejects growth beyond its constant") {
  std::vector<double> times, lhs, b;
  for (int i = 0; i <= 50; ++i) {
    double t = 0.01 * i;
    times.push_back(t);
    lhs.push_back(0.3 * std::exp(2.0 * t));
    b.push_back(0.0);
  }
  certify::Certificate cert = certify::gronwall_certificate(times, lhs, b, 0.0, 1e-10);
  CHECK_FALSE(cert.passed);
  CHECK(cert.margin < 0.0);
}

TEST_CASE("a solver trajectory certifies against a manufactured reference") {
  TorusGrid g(1, 32);
  Params p;
  solver::SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  FluidState initial = recipes::make_fluid("cos_density", {{"eps", 0.2}}, g, p);
  certify::Certificate cert = certify::certify_run(initial, USpec::traveling(0.2, 1, 1.0), p, cfg,
                                                   functionals::ErrorFieldMode::elk);
  CHECK(cert.status == "completed");
  CHECK(cert.passed);
  for (double v : cert.lhs) CHECK(v >= -1e-9);
  for (std::size_t i = 1; i < cert.b.size(); ++i) CHECK(cert.b[i] >= cert.b[i - 1] - 1e-15);
}

TEST_CASE("the adversarial zero constant breaks the certificate") {
  // Stationary shear reference with the velocity mismatch concentrated where
  // grad U < 0: the indefinite coupling term pumps the relative entropy, so the
  // bound only closes with a genuine Gronwall constant.
  TorusGrid g(1, 64);
  Params p;
  p.lambda = 0.1;
  p.hbar = 0.2;
  p.mu = 0.05;
  solver::SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.report_every = 10;
  USpec shear = USpec::traveling(0.3, 2, 0.0);
  FluidState initial{ScalarField(g, 1.0), VectorField(g), 0.0};
  initial.u[0] = sample(g, [](std::array<double, 3> x) {
    return 0.3 * std::sin(2.0 * x[0]) + std::sin(x[0]);
  });
  certify::Certificate bad = certify::certify_run(initial, shear, p, cfg,
                                                  functionals::ErrorFieldMode::elk, 1e-10, 0.0);
  CHECK_FALSE(bad.passed);
  CHECK(bad.margin < -0.1);
  certify::Certificate good =
      certify::certify_run(initial, shear, p, cfg, functionals::ErrorFieldMode::elk);
  CHECK(good.passed);
}

TEST_CASE("viscosity sweep runs and reports the definitional linearity") {
  TorusGrid g(1, 32);
  Params base;
  solver::SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  FluidState initial = recipes::make_fluid("cos_density", {{"eps", 0.2}}, g, base);
  certify::SweepResult res =
      certify::inviscid_sweep(initial, USpec::traveling(0.2, 1, 1.0), base, {0.1, 0.05}, cfg);
  REQUIRE(res.rows.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(row.status == "completed");
    CHECK(row.rel_entropy_oracle >= 0.0);
  }
  CHECK(std::fabs(res.rows[0].error_field_linearity - res.rows[1].error_field_linearity) < 1e-10);
  CHECK(res.rows[1].rel_entropy_oracle <= res.rows[0].rel_entropy_oracle);
}

TEST_CASE("invalid viscosities are reported, not fatal") {
  TorusGrid g(1, 32);
  Params base;
  base.hbar = 0.3;
  solver::SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.05;
  FluidState initial = recipes::make_fluid("cos_density", {{"eps", 0.1}}, g, base);
  certify::SweepResult res =
      certify::inviscid_sweep(initial, USpec::zero(), base, {0.5, 0.05}, cfg);  // 0.5 > hbar
  CHECK(res.rows[0].status != "completed");
  CHECK(res.rows[1].status == "completed");
}
