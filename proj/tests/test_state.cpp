#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qflk/recipes.hpp"
#include "qflk/spectral.hpp"
#include "qflk/state.hpp"

using namespace qflk;

namespace {

double linf(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid().num_points(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("madelung transform of an explicit wave function") {
  // psi = (1 + a cos x) exp(i sin(x)/hbar): rho = (1+a cos x)^2, u = cos x
  TorusGrid g(1, 64);
  Params p;
  p.hbar = 0.5;
  WaveFunction psi = recipes::make_wave("madelung_wave", {{"a", 0.3}}, g, p);
  FluidState s = madelung(psi, p);
  ScalarField rho_want =
      sample(g, [](const std::array<double, 3>& x) { return std::pow(1.0 + 0.3 * std::cos(x[0]), 2); });
  ScalarField u_want = sample(g, [](const std::array<double, 3>& x) { return std::cos(x[0]); });
  CHECK(linf(s.rho, rho_want) < 1e-10);
  CHECK(linf(s.u[0], u_want) < 1e-8);
}

TEST_CASE("inverse madelung round-trips") {
  TorusGrid g(1, 64);
  Params p;
  FluidState s = recipes::make_fluid("random_band", {{"amp", 0.2}}, g, p, 42);
  WaveFunction psi = inverse_madelung(s, p);
  CHECK(psi.l2_norm_sq() == doctest::Approx(s.mass()).epsilon(1e-12));
  FluidState back = madelung(psi, p);
  CHECK(linf(back.rho, s.rho) < 1e-9);
  CHECK(linf(back.u[0], s.u[0]) < 1e-7);
}

TEST_CASE("inverse madelung rejects rotational velocity") {
  TorusGrid g(2, 16);
  ScalarField rho(g, 1.0);
  VectorField u(g);
  u[0] = sample(g, [](const std::array<double, 3>& x) { return std::sin(x[1]); });  // shear
  CHECK_THROWS_AS(inverse_madelung(FluidState(rho, u), Params{}), NotGradientError);
}

TEST_CASE("inverse madelung rejects nonzero circulation") {
  TorusGrid g(1, 32);
  ScalarField rho(g, 1.0);
  VectorField u(g);
  u[0] = ScalarField(g, 0.7);  // constant drift: curl-free but winds around the torus
  CHECK_THROWS_AS(inverse_madelung(FluidState(rho, u), Params{}), WindingError);
}

TEST_CASE("augment/deaugment round-trips and matches the definition") {
  TorusGrid g(1, 32);
  Params p;
  p.nu = 0.1;
  p.hbar = 1.0;
  FluidState s = recipes::make_fluid("exp_cos", {{"eps", 0.4}}, g, p);
  s.u[0] = sample(g, [](const std::array<double, 3>& x) { return 0.2 * std::sin(x[0]); });
  AugmentedState a = augment(s, p);

  VectorField glr = spectral::gradient(guarded_log(s.rho, p.density_floor));
  CHECK(linf(a.w[0], s.u[0] + (p.nu / 2.0) * glr[0]) < 1e-12);
  CHECK(linf(a.vbar[0], (p.hbar_nu() / 2.0) * glr[0]) < 1e-12);

  FluidState back = deaugment(a, p);
  CHECK(linf(back.rho, s.rho) < 1e-13);
  CHECK(linf(back.u[0], s.u[0]) < 1e-12);
}

TEST_CASE("augmentation requires hbar^2 > nu^2 and lambda' > 0") {
  TorusGrid g(1, 16);
  FluidState s(ScalarField(g, 1.0), VectorField(g));
  Params p;
  p.hbar = 0.1;
  p.nu = 0.2;
  CHECK_THROWS_AS(augment(s, p), ParamError);
  Params q;
  q.lambda = 0.05;
  q.mu = 2.0;
  q.nu = 0.1;  // lambda' = 0.05 - 0.1 < 0
  CHECK_THROWS_AS(augment(s, q), ParamError);
}

TEST_CASE("vacuum guard") {
  TorusGrid g(1, 16);
  ScalarField rho(g, 1.0);
  rho[3] = 1e-12;
  CHECK_THROWS_AS(check_density(rho, 1e-8), VacuumError);
  CHECK_NOTHROW(check_density(ScalarField(g, 0.5), 1e-8));
  // clamped log never sees values under the floor
  ScalarField lr = guarded_log(ScalarField(g, 2.0), 1e-8);
  CHECK(lr[0] == doctest::Approx(std::log(2.0)));
}

TEST_CASE("mass is the integral of the density") {
  TorusGrid g(2, 16);
  FluidState s = recipes::make_fluid("cos_density", {{"eps", 0.5}}, g, Params{});
  CHECK(s.mass() == doctest::Approx(std::pow(2.0 * M_PI, 2)).epsilon(1e-12));
}
