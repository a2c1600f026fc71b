#include "qflk/functionals.hpp"

#include <cmath>
#include <sstream>

#include "qflk/spectral.hpp"

namespace qflk {

const char* EntropyReport::csv_header() {
  return "time,mass,E,D,BDE,BDD,Ereg,Dreg,BDEreg,augE,augD,relE_inst,relE_total,b,ck_gap,"
         "bohm_ratio";
}

namespace {
void put(std::ostringstream& os, const std::optional<double>& v) {
  os << ',';
  if (v) os << *v;
}
}  // namespace

std::string EntropyReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << time << ',' << mass;
  put(os, energy_nslk);
  put(os, dissipation_nslk);
  put(os, bd_entropy);
  put(os, bd_dissipation);
  put(os, energy_reg);
  put(os, dissipation_reg);
  put(os, bd_entropy_reg);
  put(os, aug_energy);
  put(os, aug_dissipation);
  put(os, rel_entropy_instant);
  put(os, rel_entropy_total);
  put(os, b_accumulator);
  put(os, ck_gap);
  put(os, bohm_ratio);
  return os.str();
}

namespace functionals {

using spectral::gradient;
using spectral::gradient_tensor;
using spectral::integrate;
using spectral::laplacian_power;

namespace {

ScalarField sqrt_field(const ScalarField& rho) {
  return map(rho, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// int rho |hess log rho|^2
double bohm_dissipation_integral(const ScalarField& rho, double floor) {
  TensorField hess = gradient_tensor(gradient(guarded_log(rho, floor)));
  return integrate(rho * norm2(hess));
}

double grad_sqrt_integral(const ScalarField& rho) {
  return integrate(norm2(gradient(sqrt_field(rho))));
}

}  // namespace

void check_mass_match(const ScalarField& rho, const ScalarField& R) {
  const double m1 = integrate(rho);
  const double m2 = integrate(R);
  if (std::fabs(m1 - m2) > 1e-8 * std::fabs(m2))
    throw MassMismatchError("masses differ beyond 1e-8 relative");
}

ScalarField enthalpy(const ScalarField& rho, double floor) {
  check_density(rho, floor);
  return map(rho, [floor](double x) { return x * (std::log(std::max(x, floor)) - 1.0); });
}

ScalarField relative_enthalpy(const ScalarField& rho, const ScalarField& R, double floor) {
  ScalarField h = enthalpy(rho, floor) - enthalpy(R, floor);
  ScalarField logR = guarded_log(R, floor);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] -= logR[i] * (rho[i] - R[i]);
  return h;
}

EnergyPair energy_nslk(const FluidState& state, const Params& p) {
  check_density(state.rho, p.density_floor);
  EnergyPair out;
  out.value = 0.5 * integrate(state.rho * norm2(state.u)) +
              0.5 * p.hbar * p.hbar * grad_sqrt_integral(state.rho) +
              p.lambda * integrate(enthalpy(state.rho, p.density_floor));
  out.dissipation = p.mu * integrate(state.rho * norm2(state.u));
  if (p.nu > 0.0)
    out.dissipation += p.nu * integrate(state.rho * norm2(spectral::sym_grad(state.u)));
  return out;
}

EnergyPair bd_entropy_nslk(const FluidState& state, const Params& p) {
  check_density(state.rho, p.density_floor);
  VectorField shifted =
      state.u + (p.nu / 2.0) * gradient(guarded_log(state.rho, p.density_floor));
  EnergyPair out;
  out.value = 0.5 * integrate(state.rho * norm2(shifted)) +
              0.5 * p.hbar * p.hbar * grad_sqrt_integral(state.rho) +
              p.lambda_prime_bd() * integrate(enthalpy(state.rho, p.density_floor));
  out.dissipation = p.mu * integrate(state.rho * norm2(state.u));
  if (p.nu > 0.0) {
    out.dissipation +=
        0.5 * p.nu * integrate(state.rho * norm2(spectral::antisym_grad(state.u))) +
        0.5 * p.nu * p.hbar * p.hbar * bohm_dissipation_integral(state.rho, p.density_floor) +
        2.0 * p.nu * grad_sqrt_integral(state.rho);
  }
  return out;
}

RegEnergyParts energy_reg_parts(const FluidState& state, const Params& p) {
  check_density(state.rho, p.density_floor);
  const ScalarField& rho = state.rho;
  const VectorField& u = state.u;
  RegEnergyParts parts;

  parts.kinetic = 0.5 * integrate(rho * norm2(u));
  parts.quantum = 0.5 * p.hbar * p.hbar * grad_sqrt_integral(rho);
  parts.isothermal = p.lambda * integrate(enthalpy(rho, p.density_floor));
  if (p.eta1 > 0.0) {
    ScalarField rho_ma = map(rho, [&](double x) {
      return std::pow(std::max(x, p.density_floor), -p.alpha);
    });
    parts.cold_pressure = p.eta1 / (p.alpha + 1.0) * integrate(rho_ma);
    if (p.delta1 > 0.0) {
      ScalarField rho_ha = map(rho, [&](double x) {
        return std::pow(std::max(x, p.density_floor), -p.alpha / 2.0);
      });
      parts.d1e1 = 4.0 * p.delta1 * p.eta1 / p.alpha * integrate(norm2(gradient(rho_ha)));
    }
  }
  if (p.eta2 > 0.0) {
    parts.hyper = 0.5 * p.eta2 * integrate(norm2(gradient(laplacian_power(rho, p.s))));
    if (p.delta1 > 0.0) {
      ScalarField lap = laplacian_power(rho, p.s + 1);
      parts.d1e2 = p.delta1 * p.eta2 * integrate(lap * lap);
    }
  }

  parts.drag_mu = p.mu * integrate(rho * norm2(u));
  if (p.nu > 0.0) parts.viscous = p.nu * integrate(rho * norm2(spectral::sym_grad(u)));
  if (p.delta2 > 0.0) {
    ScalarField lap_u(rho.grid());
    for (int a = 0; a < u.dim(); ++a) {
      ScalarField l = spectral::laplacian(u[a]);
      lap_u += l * l;
    }
    parts.hyper_visc = p.delta2 * integrate(lap_u);
  }
  if (p.delta1 > 0.0) {
    parts.d1_quantum = 4.0 * p.delta1 * grad_sqrt_integral(rho);
    parts.d1_bohm =
        0.5 * p.delta1 * p.hbar * p.hbar * bohm_dissipation_integral(rho, p.density_floor);
  }
  if (p.r0 > 0.0) parts.drag_r0 = p.r0 * integrate(norm2(u));
  if (p.r1 > 0.0) {
    ScalarField u2 = norm2(u);
    parts.drag_r1 = p.r1 * integrate(rho * (u2 * u2));
  }
  return parts;
}

EnergyPair energy_reg(const FluidState& state, const Params& p) {
  RegEnergyParts parts = energy_reg_parts(state, p);
  return {parts.energy(), parts.dissipation()};
}

EnergyPair bd_entropy_reg(const FluidState& state, const Params& p) {
  check_density(state.rho, p.density_floor);
  const ScalarField& rho = state.rho;
  const VectorField& u = state.u;
  ScalarField logrho = guarded_log(rho, p.density_floor);

  VectorField shifted = u + p.nu * gradient(logrho);
  EnergyPair out;
  out.value = 0.5 * integrate(rho * norm2(shifted)) +
              0.5 * p.hbar * p.hbar * grad_sqrt_integral(rho) +
              p.lambda_prime_bd() * integrate(enthalpy(rho, p.density_floor)) -
              p.r0 * integrate(logrho);
  if (p.eta1 > 0.0) {
    ScalarField rho_ma = map(rho, [&](double x) {
      return std::pow(std::max(x, p.density_floor), -p.alpha);
    });
    out.value += p.eta1 / (p.alpha + 1.0) * integrate(rho_ma);
  }
  if (p.eta2 > 0.0)
    out.value += 0.5 * p.eta2 * integrate(norm2(gradient(laplacian_power(rho, p.s))));

  out.dissipation = p.mu * integrate(rho * norm2(u));
  if (p.nu > 0.0) out.dissipation += p.nu * integrate(rho * norm2(spectral::antisym_grad(u)));
  const double bohm_coeff =
      p.nu * p.hbar * p.hbar + p.delta1 * p.nu * p.nu + 0.5 * p.delta1 * p.hbar * p.hbar;
  if (bohm_coeff > 0.0)
    out.dissipation += bohm_coeff * bohm_dissipation_integral(rho, p.density_floor);
  if (p.nu + p.delta1 > 0.0)
    out.dissipation += 4.0 * (p.nu + p.delta1) * grad_sqrt_integral(rho);
  const double e1_coeff = p.eta1 * p.nu * p.alpha / 4.0 + 0.4 * p.delta1 * p.eta1;
  if (e1_coeff > 0.0) {
    ScalarField rho_ha = map(rho, [&](double x) {
      return std::pow(std::max(x, p.density_floor), -p.alpha / 2.0);
    });
    out.dissipation += e1_coeff * integrate(norm2(gradient(rho_ha)));
  }
  if (p.eta2 * (p.nu + p.delta1) > 0.0) {
    ScalarField lap = laplacian_power(rho, p.s + 1);
    out.dissipation += p.eta2 * (p.nu + p.delta1) * integrate(lap * lap);
  }
  if (p.delta2 > 0.0) {
    ScalarField lap_u(rho.grid());
    for (int a = 0; a < u.dim(); ++a) {
      ScalarField l = spectral::laplacian(u[a]);
      lap_u += l * l;
    }
    out.dissipation += p.delta2 * integrate(lap_u);
  }
  if (p.r0 > 0.0) out.dissipation += p.r0 * integrate(norm2(u));
  if (p.r1 > 0.0) {
    ScalarField u2 = norm2(u);
    out.dissipation += p.r1 * integrate(rho * (u2 * u2));
  }
  return out;
}

EnergyPair aug_energy(const AugmentedState& aug, const Params& p) {
  p.validate_augmented();
  check_density(aug.rho, p.density_floor);
  const double lp = p.lambda_prime();
  EnergyPair out;
  out.value = 0.5 * integrate(aug.rho * norm2(aug.w)) + 0.5 * integrate(aug.rho * norm2(aug.vbar)) +
              lp * integrate(enthalpy(aug.rho, p.density_floor));
  out.dissipation = p.mu * integrate(aug.rho * norm2(aug.w));
  if (p.nu > 0.0) {
    out.dissipation +=
        0.5 * p.nu *
        (integrate(aug.rho * norm2(gradient_tensor(aug.w))) +
         integrate(aug.rho * norm2(gradient_tensor(aug.vbar))) +
         4.0 * lp / p.hbar_nu_sq() * integrate(aug.rho * norm2(aug.vbar)));
  }
  return out;
}

RelEntropy rel_entropy_elk(const FluidState& state, const VectorField& vbar,
                           const StrongReference& ref, const Params& p, double drag_accumulator) {
  check_mass_match(state.rho, ref.R);
  RelEntropy out;
  out.instant = 0.5 * integrate(state.rho * norm2(vbar - ref.Vbar)) +
                0.5 * integrate(state.rho * norm2(state.u - ref.U)) +
                p.lambda * integrate(relative_enthalpy(state.rho, ref.R, p.density_floor));
  out.total = out.instant + p.mu * drag_accumulator;
  return out;
}

RelEntropy rel_entropy_nslk(const AugmentedState& aug, const StrongReference& ref, const Params& p,
                            double grad_accumulator, double drag_accumulator) {
  check_mass_match(aug.rho, ref.R);
  check_density(aug.rho, p.density_floor);
  RelEntropy out;
  out.instant = 0.5 * integrate(aug.rho * norm2(aug.vbar - ref.Vbar)) +
                0.5 * integrate(aug.rho * norm2(aug.w - ref.W)) +
                p.lambda_prime() * integrate(relative_enthalpy(aug.rho, ref.R, p.density_floor));
  out.total = out.instant + 0.5 * p.nu * grad_accumulator + p.mu * drag_accumulator;
  return out;
}

double drag_mismatch_elk(const FluidState& state, const StrongReference& ref) {
  return integrate(state.rho * norm2(state.u - ref.U));
}

double drag_mismatch_nslk(const AugmentedState& aug, const StrongReference& ref) {
  return integrate(aug.rho * norm2(aug.w - ref.W));
}

double grad_mismatch_nslk(const AugmentedState& aug, const StrongReference& ref) {
  // With strictly positive rho, T(f)/sqrt(rho) reduces to grad f.
  TensorField dv = gradient_tensor(aug.vbar - ref.Vbar);
  TensorField dw = gradient_tensor(aug.w - ref.W);
  return integrate(aug.rho * norm2(dv)) + integrate(aug.rho * norm2(dw));
}

VectorField error_field(const StrongReference& ref, const Params& p, const VectorField& dUdt,
                        ErrorFieldMode mode) {
  check_density(ref.R, p.density_floor);
  const TorusGrid& g = ref.grid();

  // (U . grad) U
  TensorField gradU = gradient_tensor(ref.U);
  VectorField adv(g);
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) adv[i] += ref.U[j] * gradU.at(i, j);

  VectorField out = scale(ref.R, dUdt + adv) + p.lambda * gradient(ref.R) +
                    p.mu * scale(ref.R, ref.U) - bohm_force(ref.R, p.hbar, p.density_floor);

  if (mode == ErrorFieldMode::nslk_nu && p.nu > 0.0) {
    TensorField DU = spectral::sym_grad(ref.U);
    TensorField RDU(g);
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) RDU.at(i, j) = ref.R * DU.at(i, j);
    out -= p.nu * spectral::divergence_tensor(RDU);
  }
  return out;
}

double b_integrand(const ScalarField& rho, const VectorField& u, const StrongReference& ref,
                   const Params& p) {
  check_density(ref.R, p.density_floor);
  ScalarField e_dot_du = dot(ref.Escript, ref.U - u);
  ScalarField integrand(rho.grid());
  for (std::size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = rho[i] / std::max(ref.R[i], p.density_floor) * std::fabs(e_dot_du[i]);
  return spectral::integrate(integrand);
}

double b_accumulate(double prev, double integrand_prev, double integrand_now, double dt) {
  return prev + 0.5 * dt * (integrand_prev + integrand_now);
}

double csiszar_kullback_gap(const ScalarField& rho, const ScalarField& R, const Params& p) {
  check_mass_match(rho, R);
  ScalarField logratio = guarded_log(rho, p.density_floor) - guarded_log(R, p.density_floor);
  const double kl = integrate(rho * logratio);
  double l1rho = 0.0, l1diff = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    l1rho += std::fabs(rho[i]);
    l1diff += std::fabs(rho[i] - R[i]);
  }
  l1rho *= rho.grid().cell_volume();
  l1diff *= rho.grid().cell_volume();
  return 2.0 * l1rho * kl - l1diff * l1diff;
}

double bohm_inequality_ratio(const ScalarField& rho, const Params& p) {
  const double num = bohm_dissipation_integral(rho, p.density_floor);
  const double den = integrate(norm2(gradient_tensor(gradient(sqrt_field(rho)))));
  if (den < 1e-14) throw DegenerateError("hessian of sqrt(rho) vanishes");
  return num / den;
}

VectorField bohm_force(const ScalarField& rho, double hbar, double floor) {
  TensorField hess = gradient_tensor(gradient(guarded_log(rho, floor)));
  TensorField rho_hess(rho.grid());
  for (int i = 0; i < rho.grid().dim(); ++i)
    for (int j = 0; j < rho.grid().dim(); ++j) rho_hess.at(i, j) = rho * hess.at(i, j);
  return 0.25 * hbar * hbar * spectral::divergence_tensor(rho_hess);
}

}  // namespace functionals
}  // namespace qflk
