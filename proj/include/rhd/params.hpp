#pragma once

#include "rhd/errors.hpp"

namespace rhd {

// Physical constants of the model, dimensionless after normalization.
// The equilibrium state is fixed to density 1, velocity 0, temperature 1.
struct FluidParams {
    double R = 1.0;         // gas constant
    double Cv = 1.5;        // specific heat at constant volume
    double mu = 1.0;        // shear viscosity
    double mu_prime = 1.0 / 3.0; // second viscosity
    double kappa = 1.0;     // heat conductivity (0 = radiation-only case)
};

// FluidParams that passed validation, with the longitudinal viscous
// coefficient 2*mu + mu_prime cached.
class ValidatedParams {
  public:
    explicit ValidatedParams(const FluidParams& p);

    double R() const { return p_.R; }
    double Cv() const { return p_.Cv; }
    double mu() const { return p_.mu; }
    double mu_prime() const { return p_.mu_prime; }
    double kappa() const { return p_.kappa; }
    // 2*mu + mu_prime: viscous rate of compressional velocity modes.
    double nu() const { return nu_; }

    bool heat_conduction_free() const { return p_.kappa == 0.0; }

    const FluidParams& raw() const { return p_; }

  private:
    FluidParams p_;
    double nu_;
};

// Throws ParamError naming the offending field.
ValidatedParams validate_params(const FluidParams& p);

// Repository-wide reference configuration.
inline FluidParams reference_params(double kappa = 1.0) {
    FluidParams p;
    p.kappa = kappa;
    return p;
}

} // namespace rhd
