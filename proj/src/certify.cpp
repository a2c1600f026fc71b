#include "qflk/certify.hpp"

#include <cmath>

#include "qflk/recipes.hpp"
#include "qflk/sl_oracle.hpp"
#include "qflk/spectral.hpp"

namespace qflk::certify {

using functionals::ErrorFieldMode;

VectorField USpec::velocity(const TorusGrid& g, double t) const {
  VectorField u(g);
  switch (kind) {
    case Kind::zero:
      break;
    case Kind::uniform:
      for (int a = 0; a < g.dim(); ++a) u[a] = ScalarField(g, amplitude);
      break;
    case Kind::traveling: {
      const int k = mode;
      const double c = speed, amp = amplitude;
      u[0] = sample(g, [k, c, amp, t](const std::array<double, 3>& x) {
        return amp * std::sin(k * x[0] - c * t);
      });
      break;
    }
    case Kind::random_band:
      for (int a = 0; a < g.dim(); ++a) {
        u[a] = recipes::band_series(g, seed + static_cast<std::uint64_t>(a), 2);
        u[a] *= amplitude;
      }
      break;
  }
  return u;
}

VectorField USpec::velocity_dt(const TorusGrid& g, double t) const {
  VectorField du(g);
  if (kind == Kind::traveling) {
    const int k = mode;
    const double c = speed, amp = amplitude;
    du[0] = sample(g, [k, c, amp, t](const std::array<double, 3>& x) {
      return -amp * c * std::cos(k * x[0] - c * t);
    });
  }
  return du;
}

std::string USpec::name() const {
  switch (kind) {
    case Kind::zero: return "zero";
    case Kind::uniform: return "uniform";
    case Kind::traveling: return "traveling";
    case Kind::random_band: return "random_band";
  }
  return "?";
}

std::vector<StrongReference> manufactured_reference(const USpec& uspec, const ScalarField& R0,
                                                    const Params& p,
                                                    const solver::SolverConfig& cfg,
                                                    ErrorFieldMode mode) {
  const TorusGrid& g = R0.grid();
  const std::size_t nsteps = solver::step_count(cfg);
  const double h = cfg.dt;
  const double vbar_scale = (mode == ErrorFieldMode::elk) ? p.hbar : p.hbar_nu();

  auto drdt = [&](const ScalarField& R, double t) {
    VectorField U = uspec.velocity(g, t);
    VectorField RU(g);
    for (int a = 0; a < g.dim(); ++a) RU[a] = spectral::dealias(R * U[a]);
    return -1.0 * spectral::divergence(RU);
  };

  auto snapshot = [&](const ScalarField& R, double t) {
    StrongReference ref(g);
    ref.R = R;
    ref.U = uspec.velocity(g, t);
    ref.time = t;
    ScalarField lr = guarded_log(R, p.density_floor);
    VectorField glr = spectral::gradient(lr);
    ref.Vbar = (vbar_scale / 2.0) * glr;
    ref.W = ref.U + (p.nu / 2.0) * glr;
    ref.Escript = functionals::error_field(ref, p, uspec.velocity_dt(g, t), mode);
    return ref;
  };

  std::vector<StrongReference> refs;
  refs.reserve(nsteps + 1);
  ScalarField R = R0;
  refs.push_back(snapshot(R, 0.0));
  for (std::size_t i = 1; i <= nsteps; ++i) {
    double t = static_cast<double>(i - 1) * h;
    ScalarField k1 = drdt(R, t);
    ScalarField k2 = drdt(R + (h / 2) * k1, t + h / 2);
    ScalarField k3 = drdt(R + (h / 2) * k2, t + h / 2);
    ScalarField k4 = drdt(R + h * k3, t + h);
    R += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_density(R, p.density_floor);
    refs.push_back(snapshot(R, t + h));
  }
  return refs;
}

double estimate_C(const std::vector<StrongReference>& refs, const Params& p, double c_struct) {
  if (refs.empty()) throw ConfigError("empty reference trajectory");
  double sup = 0.0;
  for (const StrongReference& ref : refs) {
    double s = ref.W.max_abs() + ref.Vbar.max_abs() +
               spectral::gradient_tensor(ref.W).max_abs() +
               spectral::gradient_tensor(ref.Vbar).max_abs() +
               spectral::gradient(guarded_log(ref.R, p.density_floor)).max_abs();
    sup = std::max(sup, s);
  }
  return c_struct * (1.0 + sup) * (1.0 + p.nu / p.hbar_nu());
}

Certificate gronwall_certificate(const std::vector<double>& times, const std::vector<double>& lhs,
                                 const std::vector<double>& b, double C, double tol) {
  if (times.size() != lhs.size() || times.size() != b.size() || times.empty())
    throw ConfigError("certificate series must be non-empty and of equal length");
  Certificate cert;
  cert.times = times;
  cert.lhs = lhs;
  cert.b = b;
  cert.C = C;
  cert.rhs.resize(times.size());
  double conv = 0.0;  // int_0^t b(s) e^{C(t-s)} ds, advanced by trapezoid
  cert.rhs[0] = lhs[0] + b[0];
  double margin = cert.rhs[0] - lhs[0];
  bool ok = lhs[0] <= cert.rhs[0] + tol;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double dt = times[i] - times[i - 1];
    if (dt <= 0.0) throw ConfigError("certificate times must be increasing");
    double grow = std::exp(C * dt);
    conv = grow * conv + 0.5 * dt * (grow * b[i - 1] + b[i]);
    cert.rhs[i] = lhs[0] * std::exp(C * times[i]) + b[i] + C * conv;
    margin = std::min(margin, cert.rhs[i] - lhs[i]);
    ok = ok && lhs[i] <= cert.rhs[i] + tol;
  }
  cert.margin = margin;
  cert.passed = ok;
  return cert;
}

Certificate certify_run(const FluidState& initial, const USpec& uspec, const Params& p,
                        const solver::SolverConfig& cfg, ErrorFieldMode mode, double tol,
                        double c_override) {
  p.validate_augmented();
  auto refs = manufactured_reference(uspec, initial.rho, p, cfg, mode);
  AugmentedState aug = augment(initial, p);
  solver::RefTracking tracking{&refs, mode == ErrorFieldMode::elk};
  solver::RunResult rr = solver::run_aug(aug, p, cfg, &tracking);

  std::vector<double> times, lhs, b;
  for (const EntropyReport& r : rr.reports) {
    if (!r.rel_entropy_total || !r.b_accumulator) continue;
    times.push_back(r.time);
    lhs.push_back(*r.rel_entropy_total);
    b.push_back(*r.b_accumulator);
  }
  double C = (c_override >= 0.0) ? c_override : estimate_C(refs, p);
  Certificate cert = gronwall_certificate(times, lhs, b, C, tol);
  cert.u_spec_name = uspec.name();
  cert.status = rr.status;
  if (rr.status != "completed") cert.passed = false;
  return cert;
}

SweepResult inviscid_sweep(const FluidState& initial, const USpec& uspec, const Params& base,
                           const std::vector<double>& nu_list, const solver::SolverConfig& cfg) {
  if (nu_list.empty()) throw ConfigError("empty viscosity list");
  Params p0 = base;
  p0.nu = 0.0;
  p0.validate();

  // nu-independent oracle trajectory through the wave-function solver
  WaveFunction psi0 = inverse_madelung(initial, p0);
  sl::SLRunResult slr = sl::run(psi0, p0, cfg.dt, cfg.t_end);
  FluidState oracle = madelung(slr.final, p0);
  StrongReference oref(initial.grid());
  oref.R = oracle.rho;
  oref.U = oracle.u;
  oref.W = oracle.u;
  oref.Vbar = (p0.hbar / 2.0) * spectral::gradient(guarded_log(oracle.rho, p0.density_floor));
  oref.time = cfg.t_end;

  SweepResult out;
  for (double nu : nu_list) {
    SweepRow row;
    row.nu = nu;
    try {
      Params p = base;
      p.nu = nu;
      p.validate_augmented();
      auto refs = manufactured_reference(uspec, initial.rho, p, cfg, ErrorFieldMode::nslk_nu);
      AugmentedState aug = augment(initial, p);
      solver::RefTracking tracking{&refs, false};
      solver::RunResult rr = solver::run_aug(aug, p, cfg, &tracking);
      if (rr.status != "completed") {
        row.status = rr.status;
      } else {
        row.rel_entropy_ref = rr.reports.back().rel_entropy_total.value_or(0.0);
        FluidState fs = deaugment(aug, p);
        row.rel_entropy_oracle =
            functionals::rel_entropy_elk(fs, aug.vbar, oref, p0, 0.0).instant;
        if (nu > 0.0) {
          const StrongReference& last = refs.back();
          VectorField dU = uspec.velocity_dt(initial.grid(), cfg.t_end);
          VectorField e_nu = functionals::error_field(last, p, dU, ErrorFieldMode::nslk_nu);
          VectorField e_0 = functionals::error_field(last, p, dU, ErrorFieldMode::elk);
          row.error_field_linearity = (e_nu - e_0).max_abs() / nu;
        }
      }
    } catch (const ConfigError& e) {
      row.status = std::string("invalid: ") + e.what();
    } catch (const NumericalError& e) {
      row.status = std::string("failed: ") + e.what();
    }
    out.rows.push_back(std::move(row));
  }

  // least-squares slope of log(relE_oracle) against log(nu)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const SweepRow& r : out.rows) {
    if (r.status != "completed" || r.nu <= 0.0 || r.rel_entropy_oracle <= 0.0) continue;
    double x = std::log(r.nu), y = std::log(r.rel_entropy_oracle);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) out.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace qflk::certify
