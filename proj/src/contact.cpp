#include "pinncontact/contact.hpp"

#include <cmath>

#include "pinncontact/error.hpp"

namespace pinncontact {

void RigidPlane::validate() const {
    constexpr double tol = 1e-12;
    const auto unit = [](const Vec3& v) { return std::abs(dot(v, v) - 1.0) <= tol; };
    if (!unit(inward_normal) || !unit(tangent_xi) || !unit(tangent_eta)) {
        throw ConfigurationError("rigid plane frame vectors must have unit length");
    }
    if (std::abs(dot(inward_normal, tangent_xi)) > tol || std::abs(dot(inward_normal, tangent_eta)) > tol ||
        std::abs(dot(tangent_xi, tangent_eta)) > tol) {
        throw ConfigurationError("rigid plane frame vectors must be pairwise orthogonal");
    }
}

RigidPlane RigidPlane::horizontal(double height) {
    RigidPlane plane;
    plane.point_on_plane = {0.0, height, 0.0};
    return plane;
}

} // namespace pinncontact
