#ifndef QFLK_SL_ORACLE_HPP
#define QFLK_SL_ORACLE_HPP

#include <functional>

#include "qflk/state.hpp"

namespace qflk::sl {

/// Free-flight substep: psi_k <- exp(-i hbar |k|^2 dt / 2) psi_k.
WaveFunction kinetic_substep(const WaveFunction& psi, const Params& p, double dt);

/// Logarithmic-potential substep with exactly integrated phase relaxation:
/// with S = hbar arg(psi) and fixed rho = |psi|^2,
///   S(dt) = S(0) exp(-mu dt) - (lambda/mu) (1 - exp(-mu dt)) log rho.
/// |psi| is unchanged.
WaveFunction potential_substep(const WaveFunction& psi, const Params& p, double dt);

/// One Strang step: kinetic(dt/2) o potential(dt) o kinetic(dt/2).
WaveFunction strang_step(const WaveFunction& psi, const Params& p, double dt);

using WaveObserver = std::function<void(std::size_t step, const WaveFunction&)>;

struct SLRunResult {
  WaveFunction final;
  double mass_drift = 0.0;  // relative drift of the L2 norm
};

SLRunResult run(const WaveFunction& psi0, const Params& p, double dt, double t_end,
                int report_every = 1, const WaveObserver& observer = nullptr);

}  // namespace qflk::sl

#endif
