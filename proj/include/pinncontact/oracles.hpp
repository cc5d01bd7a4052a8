#pragma once

#include "pinncontact/elasticity.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact::oracles {

/// Uniaxial compression of a block on a frictionless support:
/// u = (ν p x / E, -p y / E, ν p z / E), σ_yy = -p.
MixedField patch_solution(const Vec3& x, double young, double poisson, double p);

/// Line-contact constants of a cylinder of radius R and length w pressed by a
/// resultant F = 2 R w p.
struct HertzConstants {
    double force;
    double half_width;
    double max_pressure;
};

HertzConstants hertz_constants(double young, double poisson, double radius, double length, double p);

/// Principal stresses along the load axis below the contact line.
struct HertzStress {
    double sxx;
    double syy;
    double szz;
    double tau_max;
};

/// Depth ratio below which the maximum shear is (σ_zz - σ_yy)/2.
inline constexpr double kTauBranchDepth = 0.436;

/// Maximum-shear branch rule shared by the oracle and predictions.
double tau_max_from_stresses(double sxx, double syy, double szz, double depth, double half_width);

/// Stress profile at depth d >= 0 below the contact; throws DomainError for d < 0.
HertzStress hertz_stress_profile(double depth, const HertzConstants& constants, double poisson);

/// Profile at a domain point, using depth d = y + R.
HertzStress hertz_field_at(const Vec3& x, const HertzConstants& constants, double poisson, double radius);

} // namespace pinncontact::oracles
