#ifndef QFLK_FUNCTIONALS_HPP
#define QFLK_FUNCTIONALS_HPP

#include <optional>
#include <string>

#include "qflk/state.hpp"

namespace qflk {

/// Smooth prescribed reference fields against which relative entropies are
/// measured. Vbar carries the scaling chosen at construction ((hbar/2) grad
/// log R for the inviscid system, (hbar_nu/2) grad log R for the viscous one);
/// Escript is the momentum-equation error field of the reference.
struct StrongReference {
  ScalarField R;
  VectorField U;
  VectorField W;
  VectorField Vbar;
  VectorField Escript;
  double time = 0.0;

  explicit StrongReference(const TorusGrid& g)
      : R(g, 1.0), U(g), W(g), Vbar(g), Escript(g) {}
  const TorusGrid& grid() const { return R.grid(); }
};

/// One row of the per-timestep diagnostics table.
struct EntropyReport {
  double time = 0.0;
  double mass = 0.0;
  std::optional<double> energy_nslk, dissipation_nslk;
  std::optional<double> bd_entropy, bd_dissipation;
  std::optional<double> energy_reg, dissipation_reg;
  std::optional<double> bd_entropy_reg;
  std::optional<double> aug_energy, aug_dissipation;
  std::optional<double> rel_entropy_instant, rel_entropy_total;
  std::optional<double> b_accumulator;
  std::optional<double> ck_gap;
  std::optional<double> bohm_ratio;

  static const char* csv_header();  // fixed 16-column header
  std::string csv_row() const;
};

/// Trapezoidal-in-time accumulator for the time integrals inside the
/// relative entropies; instantaneous evaluators stay pure.
struct TrapezoidAccumulator {
  double value = 0.0;
  double last_sample = 0.0;
  bool primed = false;

  void add(double sample, double dt) {
    if (primed) value += 0.5 * (last_sample + sample) * dt;
    last_sample = sample;
    primed = true;
  }
};

namespace functionals {

struct EnergyPair {
  double value = 0.0;
  double dissipation = 0.0;
};

struct RelEntropy {
  double instant = 0.0;
  double total = 0.0;
};

/// H(rho) = rho log rho - rho, evaluated as rho (log rho - 1).
ScalarField enthalpy(const ScalarField& rho, double floor);
/// Bregman divergence H(rho|R) = H(rho) - H(R) - log(R) (rho - R).
ScalarField relative_enthalpy(const ScalarField& rho, const ScalarField& R, double floor);

EnergyPair energy_nslk(const FluidState& state, const Params& p);
EnergyPair bd_entropy_nslk(const FluidState& state, const Params& p);

/// Regularized energy with per-term breakdown.
struct RegEnergyParts {
  // energy terms
  double kinetic = 0.0, quantum = 0.0, isothermal = 0.0, cold_pressure = 0.0, hyper = 0.0;
  // dissipation terms
  double drag_mu = 0.0, viscous = 0.0, hyper_visc = 0.0, d1e2 = 0.0, d1_quantum = 0.0,
         d1e1 = 0.0, drag_r0 = 0.0, drag_r1 = 0.0, d1_bohm = 0.0;
  double energy() const {
    return kinetic + quantum + isothermal + cold_pressure + hyper;
  }
  double dissipation() const {
    return drag_mu + viscous + hyper_visc + d1e2 + d1_quantum + d1e1 + drag_r0 + drag_r1 + d1_bohm;
  }
};

RegEnergyParts energy_reg_parts(const FluidState& state, const Params& p);
EnergyPair energy_reg(const FluidState& state, const Params& p);
EnergyPair bd_entropy_reg(const FluidState& state, const Params& p);
EnergyPair aug_energy(const AugmentedState& aug, const Params& p);

/// ELK relative entropy; `drag_accumulator` is the caller-advanced value of
/// int_0^t int rho |u-U|^2.
RelEntropy rel_entropy_elk(const FluidState& state, const VectorField& vbar,
                           const StrongReference& ref, const Params& p, double drag_accumulator);

/// Augmented NSLK relative entropy; two caller-advanced accumulators (the
/// nu-weighted gradient-mismatch integral and the drag integral).
RelEntropy rel_entropy_nslk(const AugmentedState& aug, const StrongReference& ref, const Params& p,
                            double grad_accumulator, double drag_accumulator);

/// Instantaneous integrands for the accumulators above.
double drag_mismatch_elk(const FluidState& state, const StrongReference& ref);
double drag_mismatch_nslk(const AugmentedState& aug, const StrongReference& ref);
double grad_mismatch_nslk(const AugmentedState& aug, const StrongReference& ref);

enum class ErrorFieldMode { elk, nslk_nu };

/// The reference error field of the momentum equation; mode nslk_nu subtracts
/// nu Div(R D U).
VectorField error_field(const StrongReference& ref, const Params& p, const VectorField& dUdt,
                        ErrorFieldMode mode);

/// Integrand int (rho/R) |Escript . (U - u)| of the b accumulator.
double b_integrand(const ScalarField& rho, const VectorField& u, const StrongReference& ref,
                   const Params& p);
/// Trapezoidal advance of b; nonnegative and nondecreasing.
double b_accumulate(double prev, double integrand_prev, double integrand_now, double dt);

/// 2 ||rho||_L1 int rho log(rho/R) - ||rho - R||_L1^2 (>= 0 for matched mass).
double csiszar_kullback_gap(const ScalarField& rho, const ScalarField& R, const Params& p);

/// int rho |hess log rho|^2  /  int |hess sqrt(rho)|^2.
double bohm_inequality_ratio(const ScalarField& rho, const Params& p);

/// (hbar^2/4) Div(rho hess log rho), the Bohm force in augmented form.
VectorField bohm_force(const ScalarField& rho, double hbar, double floor);

void check_mass_match(const ScalarField& rho, const ScalarField& R);

}  // namespace functionals
}  // namespace qflk

#endif
