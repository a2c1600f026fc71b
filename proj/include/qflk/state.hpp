#ifndef QFLK_STATE_HPP
#define QFLK_STATE_HPP

#include <complex>

#include "qflk/field.hpp"
#include "qflk/params.hpp"

namespace qflk {

/// Density/velocity pair (rho, u) at one time instant.
struct FluidState {
  ScalarField rho;
  VectorField u;
  double time = 0.0;

  FluidState(ScalarField rho_, VectorField u_, double t = 0.0)
      : rho(std::move(rho_)), u(std::move(u_)), time(t) {}
  const TorusGrid& grid() const { return rho.grid(); }
  double mass() const;
};

/// Augmented unknowns (rho, w, vbar) with w = u + (nu/2) grad log rho and
/// vbar = (hbar_nu/2) grad log rho.
struct AugmentedState {
  ScalarField rho;
  VectorField w;
  VectorField vbar;
  double time = 0.0;

  AugmentedState(ScalarField rho_, VectorField w_, VectorField vbar_, double t = 0.0)
      : rho(std::move(rho_)), w(std::move(w_)), vbar(std::move(vbar_)), time(t) {}
  const TorusGrid& grid() const { return rho.grid(); }
  double mass() const;
};

/// Complex wave function on a TorusGrid.
struct WaveFunction {
  TorusGrid grid;
  std::vector<std::complex<double>> psi;
  double time = 0.0;

  explicit WaveFunction(const TorusGrid& g, std::complex<double> fill = {1.0, 0.0})
      : grid(g), psi(g.num_points(), fill) {}
  double l2_norm_sq() const;  // integral of |psi|^2
  ScalarField density() const;
};

/// Clamped pointwise log of a density; raises VacuumError if the pre-clamp
/// minimum falls under floor/10.
ScalarField guarded_log(const ScalarField& rho, double floor);
void check_density(const ScalarField& rho, double floor);

/// rho = |psi|^2, u = hbar Im(psi* grad psi) / rho with spectral gradients.
FluidState madelung(const WaveFunction& psi, const Params& p);

/// psi = sqrt(rho) exp(iS/hbar) where S solves grad S = u with zero mean.
/// Requires u curl-free and with zero circulation on every axis.
WaveFunction inverse_madelung(const FluidState& state, const Params& p);

AugmentedState augment(const FluidState& state, const Params& p);
FluidState deaugment(const AugmentedState& aug, const Params& p);

}  // namespace qflk

#endif
