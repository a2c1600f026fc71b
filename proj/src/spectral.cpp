#include "qflk/spectral.hpp"

#include <cmath>

#include "qflk/fft.hpp"

namespace qflk::spectral {
namespace {

using Spectrum = std::vector<std::complex<double>>;

ScalarField from_spectrum(const TorusGrid& g, const Spectrum& s) {
  ScalarField r(g);
  r.values() = fft::inverse(g, s);
  return r;
}

}  // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  const TorusGrid& g = f.grid();
  Spectrum s = fft::forward(g, f.values());
  const int nyq = g.n() / 2;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const int k = g.wavevector(j)[axis];
    if (std::abs(k) == nyq)
      s[j] = 0.0;
    else
      s[j] *= std::complex<double>(0.0, static_cast<double>(k));
  }
  return from_spectrum(g, s);
}

VectorField gradient(const ScalarField& f) {
  VectorField v(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) v[a] = derivative(f, a);
  return v;
}

ScalarField divergence(const VectorField& v) {
  ScalarField r(v.grid());
  for (int a = 0; a < v.dim(); ++a) r += derivative(v[a], a);
  return r;
}

VectorField divergence_tensor(const TensorField& sigma) {
  VectorField r(sigma.grid());
  for (int i = 0; i < sigma.dim(); ++i)
    for (int j = 0; j < sigma.dim(); ++j) r[i] += derivative(sigma.at(i, j), j);
  return r;
}

ScalarField laplacian(const ScalarField& f) { return laplacian_power(f, 1); }

ScalarField laplacian_power(const ScalarField& f, int p) {
  const TorusGrid& g = f.grid();
  Spectrum s = fft::forward(g, f.values());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto k = g.wavevector(j);
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) k2 += static_cast<double>(k[a]) * k[a];
    s[j] *= std::pow(-k2, p);
  }
  return from_spectrum(g, s);
}

TensorField gradient_tensor(const VectorField& u) {
  TensorField t(u.grid());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) t.at(i, j) = derivative(u[i], j);
  return t;
}

TensorField sym_grad(const VectorField& u) {
  TensorField g = gradient_tensor(u);
  TensorField t(u.grid());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) {
      t.at(i, j) = 0.5 * (g.at(i, j) + g.at(j, i));
    }
  return t;
}

TensorField antisym_grad(const VectorField& u) {
  TensorField g = gradient_tensor(u);
  TensorField t(u.grid());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) {
      t.at(i, j) = 0.5 * (g.at(i, j) - g.at(j, i));
    }
  return t;
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double x : f.values()) sum += x;
  return sum * f.grid().cell_volume();
}

ScalarField dealias(const ScalarField& f) {
  const TorusGrid& g = f.grid();
  Spectrum s = fft::forward(g, f.values());
  const int cutoff = g.n() / 3;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto k = g.wavevector(j);
    for (int a = 0; a < g.dim(); ++a)
      if (std::abs(k[a]) > cutoff) {
        s[j] = 0.0;
        break;
      }
  }
  return from_spectrum(g, s);
}

VectorField dealias(const VectorField& v) {
  VectorField r(v.grid());
  for (int a = 0; a < v.dim(); ++a) r[a] = dealias(v[a]);
  return r;
}

}  // namespace qflk::spectral
