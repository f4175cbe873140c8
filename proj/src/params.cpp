#include "rhd/params.hpp"

namespace rhd {

ValidatedParams::ValidatedParams(const FluidParams& p) : p_(p) {
    if (!(p.R > 0.0)) throw ParamError("R");
    if (!(p.Cv > 0.0)) throw ParamError("Cv");
    if (!(p.mu > 0.0)) throw ParamError("mu");
    if (!(p.mu_prime > 0.0)) throw ParamError("mu_prime");
    if (!(p.kappa >= 0.0)) throw ParamError("kappa");
    nu_ = 2.0 * p.mu + p.mu_prime;
}

ValidatedParams validate_params(const FluidParams& p) {
    return ValidatedParams(p);
}

} // namespace rhd
