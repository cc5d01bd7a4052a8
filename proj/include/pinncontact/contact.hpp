#pragma once

#include <array>

#include "pinncontact/autodiff/tape.hpp"
#include "pinncontact/elasticity.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact {

/// Flat rigid obstacle with an orthonormal frame. The inward normal points
/// from the plane into the elastic body.
struct RigidPlane {
    Vec3 point_on_plane{0.0, 0.0, 0.0};
    Vec3 inward_normal{0.0, 1.0, 0.0};
    Vec3 tangent_xi{1.0, 0.0, 0.0};
    Vec3 tangent_eta{0.0, 0.0, 1.0};

    /// Outward normal of the elastic body on the contact boundary.
    Vec3 outward_normal() const { return {-inward_normal[0], -inward_normal[1], -inward_normal[2]}; }

    /// Throws ConfigurationError unless the frame is orthonormal to 1e-12.
    void validate() const;

    /// Plane {y = height}, body above it, frame (n_out, ξ, η) = (-e_y, e_x, e_z).
    static RigidPlane horizontal(double height);
};

template <class T>
struct ContactTractions {
    T pressure;    ///< p_n = t_c · n_out
    T tangent_xi;  ///< t_ξ = t_c · τ^ξ
    T tangent_eta; ///< t_η = t_c · τ^η
    Vec3T<T> traction; ///< t_c = σ n_out
};

/// Signed distance of the current position X + u above the plane:
/// g_n = -n_out · (x - x̂), x̂ the orthogonal projection of x onto the plane.
template <class T>
T gap(const Vec3& reference, const Vec3T<T>& u, const RigidPlane& plane) {
    // x - x̂ = ((x - x0)·n_in) n_in, and -n_out = n_in.
    const auto& n = plane.inward_normal;
    T g = (reference[0] - plane.point_on_plane[0] + u[0]) * n[0];
    g += (reference[1] - plane.point_on_plane[1] + u[1]) * n[1];
    g += (reference[2] - plane.point_on_plane[2] + u[2]) * n[2];
    return g;
}

template <class T>
ContactTractions<T> traction_decomposition(const SymStressT<T>& sigma, const RigidPlane& plane) {
    const Vec3 n = plane.outward_normal();
    ContactTractions<T> out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.traction[i] = sigma.at(i, 0) * n[0] + sigma.at(i, 1) * n[1] + sigma.at(i, 2) * n[2];
    }
    const auto project = [&](const Vec3& d) {
        return out.traction[0] * d[0] + out.traction[1] * d[1] + out.traction[2] * d[2];
    };
    out.pressure = project(n);
    out.tangent_xi = project(plane.tangent_xi);
    out.tangent_eta = project(plane.tangent_eta);
    return out;
}

/// φ(a, b) = a + b - sqrt(a² + b²); zero exactly on {a ≥ 0, b ≥ 0, ab = 0}.
template <class T>
T fischer_burmeister(const T& a, const T& b) {
    using autodiff::guarded_sqrt;
    using autodiff::square;
    return a + b - guarded_sqrt(square(a) + square(b));
}

/// φ(g_n, -p_n)
template <class T>
T kkt_residual(const T& gap_n, const T& pressure) {
    return fischer_burmeister<T>(gap_n, -pressure);
}

template <class T>
std::array<T, 2> sliding_residuals(const T& t_xi, const T& t_eta) {
    return {t_xi, t_eta};
}

} // namespace pinncontact
