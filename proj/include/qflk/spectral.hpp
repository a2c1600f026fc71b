#ifndef QFLK_SPECTRAL_HPP
#define QFLK_SPECTRAL_HPP

#include "qflk/field.hpp"

namespace qflk::spectral {

/// d/dx_axis applied spectrally. The Nyquist mode k = n/2 is zeroed in all
/// odd-order derivatives (antisymmetry of the real-transform basis).
ScalarField derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// Row-wise divergence of a tensor: (Div sigma)_i = sum_j d(sigma_ij)/dx_j.
VectorField divergence_tensor(const TensorField& sigma);
ScalarField laplacian(const ScalarField& f);
/// Applies the symbol (-|k|^2)^p.
ScalarField laplacian_power(const ScalarField& f, int p);

/// Full gradient tensor (grad u)_ij = du_i/dx_j, and its symmetric /
/// antisymmetric parts Du and Au.
TensorField gradient_tensor(const VectorField& u);
TensorField sym_grad(const VectorField& u);
TensorField antisym_grad(const VectorField& u);

/// Quadrature: cell_volume * sum of values (exact for band-limited fields).
double integrate(const ScalarField& f);

/// 2/3-rule truncation: zero every coefficient with |k_i| > n/3 on any axis.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

}  // namespace qflk::spectral

#endif
