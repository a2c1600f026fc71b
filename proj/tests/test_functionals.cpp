#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qflk/functionals.hpp"
#include "qflk/recipes.hpp"
#include "qflk/spectral.hpp"

using namespace qflk;
using namespace qflk::functionals;

namespace {

// rho = (1+a cos x)^2 with u = b sin x: every energy piece has a closed form
FluidState cos_squared_state(const TorusGrid& g, double a, double b) {
  ScalarField rho = sample(g, [a](const std::array<double, 3>& x) {
    return std::pow(1.0 + a * std::cos(x[0]), 2);
  });
  VectorField u(g);
  u[0] = sample(g, [b](const std::array<double, 3>& x) { return b * std::sin(x[0]); });
  return FluidState(rho, u);
}

}  // namespace

TEST_CASE("energy matches closed-form integrals") {
  TorusGrid g(1, 128);
  const double a = 0.3, b = 0.2;
  Params p;
  p.hbar = 0.7;
  p.lambda = 1.3;
  p.mu = 0.9;
  FluidState s = cos_squared_state(g, a, b);

  // int rho u^2 = b^2 int (1+a cos)^2 sin^2 = b^2 pi (1 + a^2/4) * ... computed
  // exactly: int sin^2 = pi, int cos sin^2 = 0, int cos^2 sin^2 = pi/4
  double kin_int = b * b * (M_PI + a * a * M_PI / 4.0);
  // int |d sqrt(rho)|^2 = a^2 int sin^2 = a^2 pi
  double quantum = 0.5 * p.hbar * p.hbar * a * a * M_PI;
  double isothermal =
      p.lambda * spectral::integrate(enthalpy(s.rho, p.density_floor));  // no elementary form

  EnergyPair e = energy_nslk(s, p);
  CHECK(e.value == doctest::Approx(0.5 * kin_int + quantum + isothermal).epsilon(1e-12));
  CHECK(e.dissipation == doctest::Approx(p.mu * kin_int).epsilon(1e-12));
}

TEST_CASE("energy integrals are grid-converged") {
  Params p;
  p.nu = 0.1;
  double prev = 0.0;
  for (int n : {64, 128}) {
    TorusGrid g(1, n);
    FluidState s = cos_squared_state(g, 0.4, 0.3);
    double v = energy_nslk(s, p).value + bd_entropy_nslk(s, p).value;
    if (prev != 0.0) CHECK(std::fabs(v - prev) < 1e-10);
    prev = v;
  }
}

TEST_CASE("uniform rest state: zero dissipation, pure enthalpy energy") {
  TorusGrid g(2, 16);
  Params p;
  FluidState s(ScalarField(g, 2.0), VectorField(g));
  EnergyPair e = energy_nslk(s, p);
  double volume = std::pow(2.0 * M_PI, 2);
  CHECK(e.value == doctest::Approx(p.lambda * volume * 2.0 * (std::log(2.0) - 1.0)).epsilon(1e-13));
  CHECK(e.dissipation == doctest::Approx(0.0));
  CHECK(energy_reg(s, p).dissipation == doctest::Approx(0.0));
}

TEST_CASE("regularized energy reduces to the plain energy at zero weights") {
  TorusGrid g(1, 64);
  Params p;
  p.nu = 0.15;
  FluidState s = cos_squared_state(g, 0.3, 0.4);
  EnergyPair a = energy_nslk(s, p);
  EnergyPair b = energy_reg(s, p);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-13));
  CHECK(a.dissipation == doctest::Approx(b.dissipation).epsilon(1e-13));
}

TEST_CASE("regularized energy terms are all active and nonnegative") {
  TorusGrid g(1, 64);
  Params p;
  p.nu = 0.1;
  p.delta1 = p.delta2 = p.eta1 = p.eta2 = p.r0 = p.r1 = 0.01;
  FluidState s = cos_squared_state(g, 0.3, 0.4);
  RegEnergyParts parts = energy_reg_parts(s, p);
  CHECK(parts.kinetic > 0.0);
  CHECK(parts.quantum > 0.0);
  CHECK(parts.cold_pressure > 0.0);
  CHECK(parts.hyper > 0.0);
  for (double d : {parts.drag_mu, parts.viscous, parts.hyper_visc, parts.d1e2, parts.d1_quantum,
                   parts.d1e1, parts.drag_r0, parts.drag_r1, parts.d1_bohm})
    CHECK(d >= 0.0);
  CHECK(parts.dissipation() > 0.0);
}

TEST_CASE("BD entropy of the plain system is the regularized one under the shift map") {
  // shift nu -> nu/2 and lambda -> lambda - mu nu / 2 identifies the two
  TorusGrid g(1, 64);
  Params p;
  p.nu = 0.2;
  p.lambda = 1.1;
  p.mu = 0.7;
  FluidState s = cos_squared_state(g, 0.35, 0.25);
  EnergyPair lhs = bd_entropy_nslk(s, p);
  Params q = p;
  q.nu = p.nu / 2.0;
  q.lambda = p.lambda - p.mu * p.nu / 2.0;
  EnergyPair rhs = bd_entropy_reg(s, q);
  CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-12));
  CHECK(lhs.dissipation == doctest::Approx(rhs.dissipation).epsilon(1e-12));
}

TEST_CASE("augmented energy equals the plain energy when nu = 0") {
  TorusGrid g(1, 64);
  Params p;
  p.hbar = 0.8;
  FluidState s = cos_squared_state(g, 0.3, 0.2);
  AugmentedState a = augment(s, p);
  CHECK(aug_energy(a, p).value == doctest::Approx(energy_nslk(s, p).value).epsilon(1e-10));
}

TEST_CASE("relative enthalpy is a nonnegative Bregman divergence") {
  TorusGrid g(1, 32);
  Params p;
  ScalarField rho = map(recipes::band_series(g, 5, 3), [](double v) { return std::exp(0.4 * v); });
  ScalarField R = map(recipes::band_series(g, 9, 3), [](double v) { return std::exp(0.3 * v); });
  ScalarField h = relative_enthalpy(rho, R, p.density_floor);
  CHECK(h.min() >= -1e-14);
  CHECK(spectral::integrate(relative_enthalpy(rho, rho, p.density_floor)) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("relative entropy vanishes against the state itself") {
  TorusGrid g(1, 64);
  Params p;
  p.nu = 0.1;
  FluidState s = cos_squared_state(g, 0.3, 0.2);
  AugmentedState a = augment(s, p);
  StrongReference ref(g);
  ref.R = s.rho;
  ref.U = s.u;
  ref.W = a.w;
  ref.Vbar = a.vbar;
  RelEntropy elk = rel_entropy_elk(s, a.vbar, ref, p, 0.0);
  CHECK(std::fabs(elk.instant) < 1e-12);
  RelEntropy nslk = rel_entropy_nslk(a, ref, p, 0.0, 0.0);
  CHECK(std::fabs(nslk.instant) < 1e-12);
  CHECK(drag_mismatch_elk(s, ref) == doctest::Approx(0.0));
  CHECK(drag_mismatch_nslk(a, ref) == doctest::Approx(0.0));
}

TEST_CASE("relative entropy rejects mass mismatch") {
  TorusGrid g(1, 32);
  Params p;
  FluidState s(ScalarField(g, 1.0), VectorField(g));
  StrongReference ref(g);
  ref.R = ScalarField(g, 1.5);
  VectorField vb(g);
  CHECK_THROWS_AS(rel_entropy_elk(s, vb, ref, p, 0.0), MassMismatchError);
}

TEST_CASE("Csiszar-Kullback gap is nonnegative on mass-matched pairs") {
  Params p;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TorusGrid g(1, 64);
    ScalarField rho =
        map(recipes::band_series(g, seed, 4), [](double v) { return std::exp(0.5 * v); });
    ScalarField R =
        map(recipes::band_series(g, seed + 1000, 4), [](double v) { return std::exp(0.5 * v); });
    // normalize to matched mass
    R *= spectral::integrate(rho) / spectral::integrate(R);
    CHECK(csiszar_kullback_gap(rho, R, p) >= -1e-9);
  }
  // equal densities saturate at zero
  TorusGrid g(1, 32);
  ScalarField rho = map(recipes::band_series(g, 3, 3), [](double v) { return std::exp(v); });
  CHECK(csiszar_kullback_gap(rho, rho, p) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Bohm ratio approaches 4 for vanishing-amplitude 1D perturbations") {
  // rho = 1 + eps cos x: int rho |(log rho)''|^2 -> eps^2 pi while
  // int |(sqrt rho)''|^2 -> eps^2 pi / 4
  TorusGrid g(1, 64);
  Params p;
  ScalarField rho =
      sample(g, [](const std::array<double, 3>& x) { return 1.0 + 1e-5 * std::cos(x[0]); });
  CHECK(bohm_inequality_ratio(rho, p) == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("Bohm ratio rejects degenerate (uniform) densities") {
  TorusGrid g(1, 32);
  CHECK_THROWS_AS(bohm_inequality_ratio(ScalarField(g, 1.0), Params{}), DegenerateError);
}

TEST_CASE("error field vanishes on the rest equilibrium") {
  TorusGrid g(1, 32);
  Params p;
  StrongReference ref(g);  // R = 1, U = 0
  VectorField e = error_field(ref, p, VectorField(g), ErrorFieldMode::elk);
  CHECK(e.max_abs() < 1e-12);
}

TEST_CASE("b accumulator is nonnegative and nondecreasing") {
  TorusGrid g(1, 64);
  Params p;
  FluidState s = cos_squared_state(g, 0.3, 0.2);
  StrongReference ref(g);
  ref.R = s.rho;
  ref.U = VectorField(g);
  ref.Escript[0] = ScalarField(g, 0.3);
  double bi = b_integrand(s.rho, s.u, ref, p);
  CHECK(bi >= 0.0);
  double b0 = 0.0;
  double b1 = b_accumulate(b0, bi, bi, 0.1);
  double b2 = b_accumulate(b1, bi, bi, 0.1);
  CHECK(b1 >= b0);
  CHECK(b2 >= b1);
  CHECK(b1 == doctest::Approx(0.1 * bi));
  // aligned velocities kill the integrand
  CHECK(b_integrand(s.rho, s.u, [&] {
          StrongReference r2(g);
          r2.R = s.rho;
          r2.U = s.u;
          r2.Escript[0] = ScalarField(g, 0.3);
          return r2;
        }(), p) == doctest::Approx(0.0));
}

TEST_CASE("trapezoid accumulator integrates linear samples exactly") {
  TrapezoidAccumulator acc;
  // samples of f(t) = 4t on t in [0,5]: integral 50, exact under the trapezoid rule
  for (int i = 0; i <= 10; ++i) acc.add(2.0 * i, 0.5);
  CHECK(acc.value == doctest::Approx(50.0).epsilon(1e-13));
}

TEST_CASE("report rows have the fixed 16-column layout") {
  std::string header(EntropyReport::csv_header());
  CHECK(std::count(header.begin(), header.end(), ',') == 15);
  EntropyReport r;
  r.time = 0.25;
  r.mass = 1.0;
  r.energy_nslk = 2.0;
  std::string row = r.csv_row();
  CHECK(std::count(row.begin(), row.end(), ',') == 15);
  CHECK(row.substr(row.size() - 6) == ",,,,,,");  // trailing optionals empty
}
