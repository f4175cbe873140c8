#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "rhd/params.hpp"

namespace rhd {

// Primitive variables (density, velocity, temperature) sampled on a grid of
// arbitrary layout; all component vectors must have equal length.
struct PrimitiveState {
    std::vector<double> rho;               // > 0 pointwise
    std::array<std::vector<double>, 3> u;
    std::vector<double> theta;             // > 0 pointwise
};

// Deviations (rho-1, u, theta-1) from the constant equilibrium, plus the
// radiative flux as an optional diagnostic (it is slaved to the temperature,
// never an independent degree of freedom).
struct PerturbationState {
    std::vector<double> n;                 // > -1 pointwise
    std::array<std::vector<double>, 3> u;
    std::vector<double> m;                 // > -1 pointwise
    std::optional<std::array<std::vector<double>, 3>> q;
};

struct Constitutive {
    double P; // pressure
    double e; // internal energy
    double E; // total energy
};

// P = R*rho*theta, e = Cv*theta, E = e + |u|^2/2. Throws DomainError on
// non-positive rho or theta.
Constitutive constitutive_eval(double rho, double theta,
                               const Eigen::Vector3d& u,
                               const ValidatedParams& p);

// Symmetric part of a velocity gradient.
Eigen::Matrix3d strain_rate(const Eigen::Matrix3d& grad_u);

// Pure shifts n = rho-1, m = theta-1; round trips are exact.
// Throws PositivityError if the resulting density or temperature is
// non-positive anywhere.
PerturbationState to_perturbation(const PrimitiveState& s);
PrimitiveState to_primitive(const PerturbationState& s);

} // namespace rhd
