#ifndef QFLK_RECIPES_HPP
#define QFLK_RECIPES_HPP

#include <cstdint>
#include <map>
#include <string>

#include "qflk/state.hpp"

namespace qflk::recipes {

/// Deterministic random trigonometric polynomial: sum over lattice modes
/// 1 <= |k|_inf <= kmax of Gaussian coefficients with standard deviation
/// 1/(1+|k|^2). Reproducible across platforms (explicit Box-Muller on
/// mt19937_64 output).
ScalarField band_series(const TorusGrid& g, std::uint64_t seed, int kmax);

/// Named initial data. Recognized names and options:
///   equilibrium                   rho = 1, u = 0
///   uniform_velocity {u0}         rho = 1, u = (u0, 0, 0)
///   cos_density {eps}             rho = 1 + eps cos x0, u = 0
///   exp_cos {eps}                 rho = exp(eps cos x0), u = 0
///   madelung_wave {a}             from psi = (1 + a cos x0) exp(i sin(x0)/hbar)
///   random_band {amp, kmax}       rho = exp(amp S1), u = amp grad S2, seeded
/// Unknown names or options raise ConfigError.
FluidState make_fluid(const std::string& name, const std::map<std::string, double>& opts,
                      const TorusGrid& g, const Params& p, std::uint64_t seed = 0);

/// Wave-function form of the same data (via the exact formula for
/// madelung_wave, otherwise by phase reconstruction from make_fluid).
WaveFunction make_wave(const std::string& name, const std::map<std::string, double>& opts,
                       const TorusGrid& g, const Params& p, std::uint64_t seed = 0);

}  // namespace qflk::recipes

#endif
