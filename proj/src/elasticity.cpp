#include "pinncontact/elasticity.hpp"

#include <cmath>

#include "pinncontact/error.hpp"

namespace pinncontact {

MaterialParams::MaterialParams(double young, double poisson) : young_modulus(young), poisson_ratio(poisson) {
    if (!(young > 0.0) || !std::isfinite(young)) {
        throw ConfigurationError("Young's modulus must be positive");
    }
    if (!(poisson > -1.0 && poisson < 0.5)) {
        throw ConfigurationError("Poisson ratio must lie in (-1, 0.5)");
    }
}

double MaterialParams::lame_lambda() const {
    const double nu = poisson_ratio;
    return young_modulus * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
}

double MaterialParams::lame_mu() const {
    return young_modulus / (2.0 * (1.0 + poisson_ratio));
}

} // namespace pinncontact
