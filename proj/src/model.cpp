#include "rhd/model.hpp"

#include <cmath>

namespace rhd {

Constitutive constitutive_eval(double rho, double theta,
                               const Eigen::Vector3d& u,
                               const ValidatedParams& p) {
    if (!(rho > 0.0)) throw DomainError("constitutive_eval: rho must be positive");
    if (!(theta > 0.0)) throw DomainError("constitutive_eval: theta must be positive");
    Constitutive c;
    c.P = p.R() * rho * theta;
    c.e = p.Cv() * theta;
    c.E = c.e + 0.5 * u.squaredNorm();
    return c;
}

Eigen::Matrix3d strain_rate(const Eigen::Matrix3d& grad_u) {
    return 0.5 * (grad_u + grad_u.transpose());
}

PerturbationState to_perturbation(const PrimitiveState& s) {
    PerturbationState out;
    out.n.resize(s.rho.size());
    out.m.resize(s.theta.size());
    for (std::size_t i = 0; i < s.rho.size(); ++i) out.n[i] = s.rho[i] - 1.0;
    for (std::size_t i = 0; i < s.theta.size(); ++i) out.m[i] = s.theta[i] - 1.0;
    out.u = s.u;
    return out;
}

PrimitiveState to_primitive(const PerturbationState& s) {
    PrimitiveState out;
    out.rho.resize(s.n.size());
    out.theta.resize(s.m.size());
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        const double rho = s.n[i] + 1.0;
        if (!(rho > 0.0)) throw PositivityError("to_primitive: non-positive density");
        out.rho[i] = rho;
    }
    for (std::size_t i = 0; i < s.m.size(); ++i) {
        const double theta = s.m[i] + 1.0;
        if (!(theta > 0.0)) throw PositivityError("to_primitive: non-positive temperature");
        out.theta[i] = theta;
    }
    out.u = s.u;
    return out;
}

} // namespace rhd
