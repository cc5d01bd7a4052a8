#pragma once

#include <span>

#include "pinncontact/elasticity.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact::harness {

/// 100 ||pred - truth|| / ||truth||; throws DomainError for an all-zero truth
/// and ConfigurationError for mismatched or empty inputs.
double relative_l2(std::span<const double> pred, std::span<const double> truth);

/// Radial and hoop stress about the z axis, with the polar angle measured
/// from the downward vertical (e_r = (sin t, -cos t, 0)).
struct PolarStress {
    double srr;
    double stt;
};

PolarStress polar_stress(const Vec3& x, const SymStress& sigma);

} // namespace pinncontact::harness
