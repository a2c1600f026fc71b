#include "qflk/recipes.hpp"

#include <cmath>
#include <random>
#include <set>

#include "qflk/spectral.hpp"

namespace qflk::recipes {

namespace {

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double opt(const std::map<std::string, double>& opts, const std::string& key, double fallback,
           const std::set<std::string>& known) {
  for (const auto& [k, v] : opts)
    if (!known.count(k)) throw ConfigError("unknown initial-data option: " + k);
  auto it = opts.find(key);
  return it == opts.end() ? fallback : it->second;
}

}  // namespace

ScalarField band_series(const TorusGrid& g, std::uint64_t seed, int kmax) {
  if (kmax < 1) throw ConfigError("band_series needs kmax >= 1");
  std::mt19937_64 rng(seed);
  const int d = g.dim();
  ScalarField out(g);
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int a = 0; a < d; ++a) {
    lo[a] = -kmax;
    hi[a] = kmax;
  }
  for (int k0 = lo[0]; k0 <= hi[0]; ++k0)
    for (int k1 = lo[1]; k1 <= hi[1]; ++k1)
      for (int k2 = lo[2]; k2 <= hi[2]; ++k2) {
        // one representative per {k, -k} pair
        if (k0 < 0 || (k0 == 0 && (k1 < 0 || (k1 == 0 && k2 <= 0)))) continue;
        double kk = k0 * k0 + k1 * k1 + k2 * k2;
        double sd = 1.0 / (1.0 + kk);
        double a = sd * gaussian(rng);
        double b = sd * gaussian(rng);
        for (std::size_t i = 0; i < g.num_points(); ++i) {
          auto x = g.point(i);
          double ph = k0 * x[0] + k1 * x[1] + k2 * x[2];
          out[i] += a * std::cos(ph) + b * std::sin(ph);
        }
      }
  return out;
}

FluidState make_fluid(const std::string& name, const std::map<std::string, double>& opts,
                      const TorusGrid& g, const Params& p, std::uint64_t seed) {
  if (name == "equilibrium") {
    opt(opts, "", 0.0, {});
    return FluidState(ScalarField(g, 1.0), VectorField(g));
  }
  if (name == "uniform_velocity") {
    double u0 = opt(opts, "u0", 0.1, {"u0"});
    VectorField u(g);
    u[0] = ScalarField(g, u0);
    return FluidState(ScalarField(g, 1.0), u);
  }
  if (name == "cos_density") {
    double eps = opt(opts, "eps", 0.1, {"eps"});
    if (std::fabs(eps) >= 1.0) throw ConfigError("cos_density needs |eps| < 1");
    ScalarField rho = sample(g, [eps](const std::array<double, 3>& x) { return 1.0 + eps * std::cos(x[0]); });
    return FluidState(rho, VectorField(g));
  }
  if (name == "exp_cos") {
    double eps = opt(opts, "eps", 0.1, {"eps"});
    ScalarField rho = sample(g, [eps](const std::array<double, 3>& x) { return std::exp(eps * std::cos(x[0])); });
    return FluidState(rho, VectorField(g));
  }
  if (name == "madelung_wave") return madelung(make_wave(name, opts, g, p, seed), p);
  if (name == "random_band") {
    double amp = opt(opts, "amp", 0.1, {"amp", "kmax"});
    int kmax = static_cast<int>(opt(opts, "kmax", 4.0, {"amp", "kmax"}));
    ScalarField rho = map(band_series(g, seed, kmax), [amp](double v) { return std::exp(amp * v); });
    VectorField u = spectral::gradient(band_series(g, seed + 1, kmax));
    u *= amp;
    return FluidState(rho, u);
  }
  throw ConfigError("unknown initial-data recipe: " + name);
}

WaveFunction make_wave(const std::string& name, const std::map<std::string, double>& opts,
                       const TorusGrid& g, const Params& p, std::uint64_t seed) {
  if (name == "madelung_wave") {
    double a = opt(opts, "a", 0.2, {"a"});
    if (std::fabs(a) >= 1.0) throw ConfigError("madelung_wave needs |a| < 1");
    WaveFunction psi(g);
    for (std::size_t i = 0; i < g.num_points(); ++i) {
      auto x = g.point(i);
      psi.psi[i] = (1.0 + a * std::cos(x[0])) *
                   std::polar(1.0, std::sin(x[0]) / p.hbar);
    }
    return psi;
  }
  return inverse_madelung(make_fluid(name, opts, g, p, seed), p);
}

}  // namespace qflk::recipes
