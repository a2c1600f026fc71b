#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qflk/recipes.hpp"
#include "qflk/sl_oracle.hpp"
#include "qflk/spectral.hpp"

using namespace qflk;

TEST_CASE("kinetic substep is exact on plane waves") {
  TorusGrid g(1, 32);
  Params p;
  p.hbar = 0.7;
  const int k = 3;
  WaveFunction psi(g);
  for (std::size_t i = 0; i < g.num_points(); ++i)
    psi.psi[i] = std::polar(1.0, k * g.point(i)[0]);
  double t = 0.37;
  WaveFunction out = sl::kinetic_substep(psi, p, t);
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    std::complex<double> want = std::polar(1.0, k * g.point(i)[0] - 0.5 * p.hbar * k * k * t);
    CHECK(std::abs(out.psi[i] - want) < 1e-12);
  }
}

TEST_CASE("kinetic substep is unitary") {
  TorusGrid g(2, 16);
  Params p;
  WaveFunction psi(g);
  ScalarField amp = recipes::band_series(g, 5, 3);
  ScalarField ph = recipes::band_series(g, 6, 3);
  for (std::size_t i = 0; i < g.num_points(); ++i)
    psi.psi[i] = std::polar(std::exp(0.2 * amp[i]), ph[i]);
  double m0 = psi.l2_norm_sq();
  WaveFunction out = sl::kinetic_substep(psi, p, 0.1);
  CHECK(out.l2_norm_sq() == doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("potential substep solves the phase relaxation exactly") {
  TorusGrid g(1, 16);
  Params p;
  p.lambda = 1.4;
  p.mu = 0.9;
  p.hbar = 0.8;
  WaveFunction psi(g);
  for (std::size_t i = 0; i < g.num_points(); ++i) psi.psi[i] = std::polar(1.3, 0.4);
  double dt = 0.25;
  WaveFunction out = sl::potential_substep(psi, p, dt);
  // S' = -lambda log rho - mu S with constant rho = 1.69:
  // S(t) = (S0 + (lambda/mu) log rho) e^{-mu t} - (lambda/mu) log rho
  double S0 = p.hbar * 0.4;
  double lr = 2.0 * std::log(1.3);
  double want = (S0 + p.lambda / p.mu * lr) * std::exp(-p.mu * dt) - p.lambda / p.mu * lr;
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    CHECK(std::abs(out.psi[i]) == doctest::Approx(1.3).epsilon(1e-13));
    CHECK(p.hbar * std::arg(out.psi[i]) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("potential substep satisfies the phase ODE residual") {
  // central-difference residual of S' + lambda log rho + mu S = 0 at h/2
  TorusGrid g(1, 32);
  Params p;
  p.lambda = 1.2;
  p.mu = 0.7;
  WaveFunction psi = recipes::make_wave("madelung_wave", {{"a", 0.3}}, g, p);
  double h = 1e-5;
  WaveFunction half = sl::potential_substep(psi, p, h / 2);
  WaveFunction full = sl::potential_substep(psi, p, h);
  for (std::size_t i = 0; i < g.num_points(); i += 5) {
    double S0 = p.hbar * std::arg(psi.psi[i]);
    double Sh = p.hbar * std::arg(full.psi[i]);
    double Sm = p.hbar * std::arg(half.psi[i]);
    double rho = std::norm(psi.psi[i]);
    double resid = (Sh - S0) / h + p.lambda * std::log(rho) + p.mu * Sm;
    CHECK(std::fabs(resid) < 1e-8);
  }
}

TEST_CASE("strang composition conserves mass over long runs") {
  TorusGrid g(1, 64);
  Params p;
  WaveFunction psi = recipes::make_wave("madelung_wave", {{"a", 0.3}}, g, p);
  sl::SLRunResult res = sl::run(psi, p, 1e-3, 1.0);
  CHECK(res.mass_drift < 1e-12);
  CHECK(res.final.time == doctest::Approx(1.0));
}

TEST_CASE("strang splitting is second-order in time") {
  TorusGrid g(1, 64);
  Params p;
  p.hbar = 1.0;
  WaveFunction psi0 = recipes::make_wave("madelung_wave", {{"a", 0.2}}, g, p);
  const double T = 0.25;
  auto err_vs = [&](double dt, const WaveFunction& ref) {
    sl::SLRunResult r = sl::run(psi0, p, dt, T);
    double m = 0.0;
    for (std::size_t i = 0; i < g.num_points(); ++i)
      m = std::max(m, std::abs(r.final.psi[i] - ref.psi[i]));
    return m;
  };
  sl::SLRunResult fine = sl::run(psi0, p, 1e-5, T);
  double e1 = err_vs(2e-3, fine.final);
  double e2 = err_vs(1e-3, fine.final);
  double e3 = err_vs(5e-4, fine.final);
  double slope = std::log2(e1 / e3) / 2.0;
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK(e2 < e1);
}

TEST_CASE("vacuum amplitudes are rejected") {
  TorusGrid g(1, 16);
  Params p;
  WaveFunction psi(g, {1e-12, 0.0});
  CHECK_THROWS_AS(sl::potential_substep(psi, p, 0.1), VacuumError);
}
