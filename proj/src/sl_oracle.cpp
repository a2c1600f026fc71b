#include "qflk/sl_oracle.hpp"

#include <cmath>

#include "qflk/fft.hpp"

namespace qflk::sl {

WaveFunction kinetic_substep(const WaveFunction& psi, const Params& p, double dt) {
  const TorusGrid& g = psi.grid;
  auto spec = fft::forward_c(g, psi.psi);
  const int d = g.dim();
  const int n = g.n();
  // flat index over the full cube, row-major, last axis fastest
  for (std::size_t f = 0; f < spec.size(); ++f) {
    std::size_t rem = f;
    double k2 = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      int idx = static_cast<int>(rem % n);
      rem /= n;
      double k = g.wavenumber(idx);
      k2 += k * k;
    }
    double phase = -0.5 * p.hbar * k2 * dt;
    spec[f] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  WaveFunction out(g);
  out.psi = fft::inverse_c(g, spec);
  out.time = psi.time + dt;
  return out;
}

WaveFunction potential_substep(const WaveFunction& psi, const Params& p, double dt) {
  WaveFunction out(psi.grid);
  out.time = psi.time + dt;
  const double amp_floor = std::sqrt(p.density_floor);
  const double decay = std::exp(-p.mu * dt);
  const double pump = (p.lambda / p.mu) * (1.0 - decay);
  for (std::size_t i = 0; i < psi.psi.size(); ++i) {
    double amp = std::abs(psi.psi[i]);
    if (amp < amp_floor / 10.0)
      throw VacuumError("wave-function amplitude fell under the density floor");
    double S = p.hbar * std::arg(psi.psi[i]);
    double logrho = 2.0 * std::log(std::max(amp, amp_floor));
    double Snew = S * decay - pump * logrho;
    out.psi[i] = std::polar(amp, Snew / p.hbar);
  }
  return out;
}

WaveFunction strang_step(const WaveFunction& psi, const Params& p, double dt) {
  WaveFunction a = kinetic_substep(psi, p, dt / 2.0);
  WaveFunction b = potential_substep(a, p, dt);
  WaveFunction c = kinetic_substep(b, p, dt / 2.0);
  c.time = psi.time + dt;
  return c;
}

SLRunResult run(const WaveFunction& psi0, const Params& p, double dt, double t_end,
                int report_every, const WaveObserver& observer) {
  p.validate();
  if (dt <= 0.0 || t_end <= 0.0) throw ConfigError("dt and t_end must be > 0");
  if (report_every < 1) throw ConfigError("report_every must be >= 1");
  double raw = t_end / dt;
  auto nsteps = static_cast<std::size_t>(std::llround(raw));
  if (nsteps == 0 || std::fabs(raw - static_cast<double>(nsteps)) > 1e-9 * raw)
    throw ConfigError("t_end must be an integer multiple of dt");

  const double mass0 = psi0.l2_norm_sq();
  WaveFunction psi = psi0;
  if (observer) observer(0, psi);
  for (std::size_t i = 1; i <= nsteps; ++i) {
    psi = strang_step(psi, p, dt);
    if (observer && (i % static_cast<std::size_t>(report_every) == 0 || i == nsteps))
      observer(i, psi);
  }
  double drift = std::fabs(psi.l2_norm_sq() - mass0) / mass0;
  if (drift > 1e-10) throw MassMismatchError("wave-function norm drifted beyond 1e-10");
  return {std::move(psi), drift};
}

}  // namespace qflk::sl
