#include "qflk/state.hpp"

#include <cmath>

#include "qflk/fft.hpp"
#include "qflk/spectral.hpp"

namespace qflk {

double FluidState::mass() const { return spectral::integrate(rho); }
double AugmentedState::mass() const { return spectral::integrate(rho); }

double WaveFunction::l2_norm_sq() const { return spectral::integrate(density()); }

ScalarField WaveFunction::density() const {
  ScalarField rho(grid);
  for (std::size_t i = 0; i < psi.size(); ++i) rho[i] = std::norm(psi[i]);
  return rho;
}

void check_density(const ScalarField& rho, double floor) {
  if (rho.min() < floor / 10.0) throw VacuumError("density fell below floor/10");
}

ScalarField guarded_log(const ScalarField& rho, double floor) {
  check_density(rho, floor);
  return map(rho, [floor](double x) { return std::log(std::max(x, floor)); });
}

FluidState madelung(const WaveFunction& wf, const Params& p) {
  const TorusGrid& g = wf.grid;
  ScalarField rho = wf.density();
  check_density(rho, p.density_floor);

  ScalarField re(g), im(g);
  for (std::size_t i = 0; i < wf.psi.size(); ++i) {
    re[i] = wf.psi[i].real();
    im[i] = wf.psi[i].imag();
  }
  VectorField dre = spectral::gradient(re);
  VectorField dim = spectral::gradient(im);

  // momentum m = hbar Im(psi* grad psi) = hbar (re * grad im - im * grad re)
  VectorField u(g);
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const double m = p.hbar * (re[i] * dim[a][i] - im[i] * dre[a][i]);
      u[a][i] = m / std::max(rho[i], p.density_floor);
    }
  return FluidState(std::move(rho), std::move(u), wf.time);
}

WaveFunction inverse_madelung(const FluidState& state, const Params& p) {
  const TorusGrid& g = state.grid();
  check_density(state.rho, p.density_floor);

  if (spectral::antisym_grad(state.u).max_abs() > 1e-6)
    throw NotGradientError("velocity is not curl-free");
  for (int a = 0; a < g.dim(); ++a) {
    const double circulation =
        spectral::integrate(state.u[a]) / g.volume() * (2.0 * M_PI);
    if (std::fabs(circulation) > 1e-8)
      throw WindingError("nonzero circulation along axis " + std::to_string(a));
  }

  // grad S = u  =>  S_k = -i k . u_k / |k|^2, zero mean.
  std::vector<std::vector<std::complex<double>>> uhat(g.dim());
  for (int a = 0; a < g.dim(); ++a) uhat[a] = fft::forward(g, state.u[a].values());
  std::vector<std::complex<double>> shat(g.spec_size(), 0.0);
  for (std::size_t j = 0; j < shat.size(); ++j) {
    const auto k = g.wavevector(j);
    double k2 = 0.0;
    std::complex<double> kdotu = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      k2 += static_cast<double>(k[a]) * k[a];
      kdotu += static_cast<double>(k[a]) * uhat[a][j];
    }
    if (k2 > 0.0) shat[j] = std::complex<double>(0.0, -1.0) * kdotu / k2;
  }
  std::vector<double> S = fft::inverse(g, shat);

  WaveFunction wf(g);
  wf.time = state.time;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double amp = std::sqrt(std::max(state.rho[i], p.density_floor));
    wf.psi[i] = std::polar(amp, S[i] / p.hbar);
  }
  return wf;
}

AugmentedState augment(const FluidState& state, const Params& p) {
  p.validate_augmented();
  VectorField dlog = spectral::gradient(guarded_log(state.rho, p.density_floor));
  VectorField w = state.u + (p.nu / 2.0) * dlog;
  VectorField vbar = (p.hbar_nu() / 2.0) * dlog;
  return AugmentedState(state.rho, std::move(w), std::move(vbar), state.time);
}

FluidState deaugment(const AugmentedState& aug, const Params& p) {
  p.validate_augmented();
  VectorField dlog = spectral::gradient(guarded_log(aug.rho, p.density_floor));
  VectorField u = aug.w - (p.nu / 2.0) * dlog;
  return FluidState(aug.rho, std::move(u), aug.time);
}

}  // namespace qflk
