#include "pinncontact/oracles.hpp"

#include <cmath>
#include <numbers>

#include "pinncontact/error.hpp"

namespace pinncontact::oracles {

MixedField patch_solution(const Vec3& x, double young, double poisson, double p) {
    const double strain = p / young;
    MixedField f;
    f.u = {poisson * strain * x[0], -strain * x[1], poisson * strain * x[2]};
    f.sigma[1] = -p;
    return f;
}

HertzConstants hertz_constants(double young, double poisson, double radius, double length, double p) {
    if (!(young > 0.0 && radius > 0.0 && length > 0.0 && p > 0.0)) {
        throw DomainError("hertz_constants: inputs must be positive");
    }
    HertzConstants c{};
    c.force = 2.0 * radius * length * p;
    const double compliance = (1.0 - poisson * poisson) / young;
    const double curvature = 1.0 / (2.0 * radius);
    c.half_width = std::sqrt(2.0 * c.force / (std::numbers::pi * length) * compliance / curvature);
    c.max_pressure = 2.0 * c.force / (std::numbers::pi * c.half_width * length);
    return c;
}

double tau_max_from_stresses(double sxx, double syy, double szz, double depth, double half_width) {
    if (depth <= kTauBranchDepth * half_width) {
        return 0.5 * (szz - syy);
    }
    return 0.5 * (sxx - syy);
}

HertzStress hertz_stress_profile(double depth, const HertzConstants& constants, double poisson) {
    if (!(depth >= 0.0)) {
        throw DomainError("hertz_stress_profile: depth must be non-negative");
    }
    const double s = depth / constants.half_width;
    const double root = std::sqrt(1.0 + s * s);
    const double pmax = constants.max_pressure;
    HertzStress out{};
    out.sxx = -pmax * ((1.0 + 2.0 * s * s) / root - 2.0 * s);
    out.syy = -pmax / root;
    out.szz = -2.0 * poisson * pmax * (root - s);
    out.tau_max = tau_max_from_stresses(out.sxx, out.syy, out.szz, depth, constants.half_width);
    return out;
}

HertzStress hertz_field_at(const Vec3& x, const HertzConstants& constants, double poisson, double radius) {
    double depth = x[1] + radius;
    // Points on the contact line can sit a rounding error below the obstacle.
    if (depth < 0.0 && depth > -1e-12) {
        depth = 0.0;
    }
    return hertz_stress_profile(depth, constants, poisson);
}

} // namespace pinncontact::oracles
