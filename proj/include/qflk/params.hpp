#ifndef QFLK_PARAMS_HPP
#define QFLK_PARAMS_HPP

#include <cmath>

#include "qflk/errors.hpp"

namespace qflk {

/// Physical and regularization constants.
///
/// Two distinct shifted-pressure constants are exposed because the BD
/// estimate of the viscous system uses lambda - mu*nu while the augmented
/// system uses lambda - mu*nu/2; each functional picks its own convention.
struct Params {
  double lambda = 1.0;  // pressure constant, > 0
  double mu = 1.0;      // drag constant, > 0
  double hbar = 1.0;    // scaled Planck constant, > 0
  double nu = 0.0;      // viscosity, >= 0

  // regularization weights, in [0,1)
  double delta1 = 0.0;
  double delta2 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;

  double alpha = 2.0;  // cold-pressure exponent, > 0
  int s = 1;           // hyperdiffusion order, >= 1

  double density_floor = 1e-8;

  double lambda_prime() const { return lambda - mu * nu / 2.0; }     // augmented system
  double lambda_prime_bd() const { return lambda - mu * nu; }        // BD entropy
  double hbar_nu_sq() const { return hbar * hbar - nu * nu; }
  double hbar_nu() const { return std::sqrt(hbar_nu_sq()); }

  void validate() const {
    if (lambda <= 0.0) throw ParamError("lambda must be > 0");
    if (mu <= 0.0) throw ParamError("mu must be > 0");
    if (hbar <= 0.0) throw ParamError("hbar must be > 0");
    if (nu < 0.0) throw ParamError("nu must be >= 0");
    for (double w : {delta1, delta2, eta1, eta2, r0, r1})
      if (w < 0.0 || w >= 1.0) throw ParamError("regularization weights must lie in [0,1)");
    if (alpha <= 0.0) throw ParamError("alpha must be > 0");
    if (s < 1) throw ParamError("s must be >= 1");
    if (density_floor <= 0.0) throw ParamError("density_floor must be > 0");
  }

  /// Extra requirements for the augmented dynamics.
  void validate_augmented() const {
    validate();
    if (hbar_nu_sq() <= 0.0) throw ParamError("augmented dynamics require hbar^2 - nu^2 > 0");
    if (lambda_prime() <= 0.0)
      throw ParamError("augmented dynamics require lambda' = lambda - mu*nu/2 > 0");
  }
};

}  // namespace qflk

#endif
