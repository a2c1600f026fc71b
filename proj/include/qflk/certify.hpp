#ifndef QFLK_CERTIFY_HPP
#define QFLK_CERTIFY_HPP

#include <string>
#include <vector>

#include "qflk/functionals.hpp"
#include "qflk/solver.hpp"

namespace qflk::certify {

/// Prescribed smooth reference velocity U(t,x) together with its time
/// derivative; the reference density is advanced by the continuity equation.
struct USpec {
  enum class Kind { zero, uniform, traveling, random_band } kind = Kind::zero;
  double amplitude = 0.0;
  int mode = 1;       // wavenumber of the traveling wave, along axis 0
  double speed = 0.0; // phase speed of the traveling wave
  std::uint64_t seed = 0;

  VectorField velocity(const TorusGrid& g, double t) const;
  VectorField velocity_dt(const TorusGrid& g, double t) const;

  static USpec zero() { return {}; }
  static USpec uniform(double c) { return {Kind::uniform, c}; }
  static USpec traveling(double a, int k, double c) { return {Kind::traveling, a, k, c}; }
  static USpec random_band(std::uint64_t seed, double a) {
    USpec u{Kind::random_band, a};
    u.seed = seed;
    return u;
  }

  std::string name() const;
};

/// Builds one StrongReference per solver step (size nsteps+1): the density is
/// transported by rk4 on d R/dt = -Div(R U), and each snapshot carries W,
/// Vbar (scaled by hbar for the inviscid mode, hbar_nu for the viscous one)
/// and the momentum-equation error field of (R, U).
std::vector<StrongReference> manufactured_reference(const USpec& uspec, const ScalarField& R0,
                                                    const Params& p, const solver::SolverConfig& cfg,
                                                    functionals::ErrorFieldMode mode);

/// Stability constant for the Gronwall bound: c_struct (1 + sup-norms of
/// W, Vbar, their gradients and grad log R) (1 + nu/hbar_nu).
double estimate_C(const std::vector<StrongReference>& refs, const Params& p,
                  double c_struct = 8.0);

struct Certificate {
  std::vector<double> times;
  std::vector<double> lhs;  // relative entropy along the run
  std::vector<double> rhs;  // Gronwall majorant
  std::vector<double> b;
  double C = 0.0;
  double margin = 0.0;  // min over time of rhs - lhs
  bool passed = false;
  std::string u_spec_name;
  std::string status = "completed";
};

/// Pointwise check lhs(t) <= rhs(t) + tol with
/// rhs(t) = lhs(0) e^{Ct} + b(t) + C int_0^t b(s) e^{C(t-s)} ds.
Certificate gronwall_certificate(const std::vector<double>& times, const std::vector<double>& lhs,
                                 const std::vector<double>& b, double C, double tol);

/// Runs the augmented system against the manufactured reference for one
/// U spec and evaluates the certificate. `mode` selects the inviscid (elk)
/// or viscous relative entropy. `c_override >= 0` replaces the estimated C.
Certificate certify_run(const FluidState& initial, const USpec& uspec, const Params& p,
                        const solver::SolverConfig& cfg, functionals::ErrorFieldMode mode,
                        double tol = 1e-8, double c_override = -1.0);

struct SweepRow {
  double nu = 0.0;
  double rel_entropy_ref = 0.0;     // vs the manufactured reference at t_end
  double rel_entropy_oracle = 0.0;  // vs the wave-function oracle at t_end
  double error_field_linearity = 0.0;  // ||E^nu - E||_inf / nu
  std::string status = "completed";
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double fitted_order = 0.0;  // log-log slope of rel_entropy_oracle vs nu
};

/// Viscosity sweep: for each nu, augment the same initial data, run, and
/// measure the distance to the nu-independent wave-function oracle and to a
/// manufactured reference.
SweepResult inviscid_sweep(const FluidState& initial, const USpec& uspec, const Params& base,
                           const std::vector<double>& nu_list, const solver::SolverConfig& cfg);

}  // namespace qflk::certify

#endif
