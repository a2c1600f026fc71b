#ifndef QFLK_SOLVER_HPP
#define QFLK_SOLVER_HPP

#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "qflk/functionals.hpp"
#include "qflk/state.hpp"

namespace qflk::solver {

enum class Scheme { rk4, imex_cn };

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::rk4;
  bool dealias = true;
  int report_every = 1;
  double density_floor = 1e-8;

  void validate() const {
    if (dt <= 0.0) throw ConfigError("dt must be > 0");
    if (t_end <= 0.0) throw ConfigError("t_end must be > 0");
    if (report_every < 1) throw ConfigError("report_every must be >= 1");
  }
};

/// Right-hand side of the regularized viscous system in conserved variables:
/// returns (d rho/dt, d(rho u)/dt).
std::pair<ScalarField, VectorField> rhs_reg_nslk(const FluidState& state, const Params& p,
                                                 bool dealias = true);

/// Right-hand side of the augmented system in conserved variables:
/// returns (d rho/dt, d(rho w)/dt, d(rho vbar)/dt). With nu = 0 this is the
/// augmented inviscid system.
std::tuple<ScalarField, VectorField, VectorField> rhs_aug_nslk(const AugmentedState& aug,
                                                               const Params& p,
                                                               bool dealias = true);

FluidState step_reg(const FluidState& state, const Params& p, const SolverConfig& cfg);
AugmentedState step_aug(const AugmentedState& aug, const Params& p, const SolverConfig& cfg);

/// Reference tracking for relative-entropy and b diagnostics along a run.
/// `refs` must hold one snapshot per solver step (size >= nsteps+1).
struct RefTracking {
  const std::vector<StrongReference>* refs = nullptr;
  bool elk_mode = true;  // ELK: mismatch in (u, U); NSLK: mismatch in (w, W)
};

struct RunResult {
  std::vector<EntropyReport> reports;
  std::string status = "completed";  // completed | vacuum | blowup
  std::string reason;
  std::size_t steps_taken = 0;
  double final_time = 0.0;
};

using FluidObserver = std::function<void(std::size_t step, const FluidState&)>;
using AugObserver = std::function<void(std::size_t step, const AugmentedState&)>;

RunResult run_reg(FluidState& state, const Params& p, const SolverConfig& cfg,
                  const FluidObserver& observer = nullptr);

RunResult run_aug(AugmentedState& aug, const Params& p, const SolverConfig& cfg,
                  const RefTracking* tracking = nullptr, const AugObserver& observer = nullptr);

/// Number of steps implied by (dt, t_end); t_end must be an integer multiple
/// of dt to within 1e-9.
std::size_t step_count(const SolverConfig& cfg);

}  // namespace qflk::solver

#endif
