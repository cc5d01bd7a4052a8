#pragma once

#include <array>

#include "pinncontact/types.hpp"

namespace pinncontact {

/// Isotropic linear-elastic material.
struct MaterialParams {
    double young_modulus = 1.0;
    double poisson_ratio = 0.0;

    /// Throws ConfigurationError unless E > 0 and -1 < nu < 0.5.
    MaterialParams(double young, double poisson);

    double lame_lambda() const;
    double lame_mu() const;
};

/// Symmetric tensor in Voigt order (xx, yy, zz, xy, yz, xz). Shear slots hold
/// tensor components, not engineering shears.
template <class T, class Tag>
struct Voigt {
    std::array<T, 6> c{};

    T& operator[](std::size_t i) { return c[i]; }
    const T& operator[](std::size_t i) const { return c[i]; }

    T trace() const { return c[0] + c[1] + c[2]; }

    /// Full tensor entry (i, j).
    const T& at(std::size_t i, std::size_t j) const { return c[voigt_index(i, j)]; }

    static constexpr std::size_t voigt_index(std::size_t i, std::size_t j) {
        constexpr std::size_t table[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
        return table[i][j];
    }
};

struct StressTag {};
struct StrainTag {};

template <class T>
using SymStressT = Voigt<T, StressTag>;
template <class T>
using SymStrainT = Voigt<T, StrainTag>;
using SymStress = SymStressT<double>;
using SymStrain = SymStrainT<double>;

template <class T>
struct MixedFieldT {
    Vec3T<T> u{};
    SymStressT<T> sigma{};
};
using MixedField = MixedFieldT<double>;

/// ε = (∇u + ∇uᵀ)/2 with grad_u[i][j] = du_i/dx_j.
template <class T>
SymStrainT<T> strain_from_displacement_gradient(const Mat3T<T>& grad_u) {
    SymStrainT<T> eps;
    eps[0] = grad_u[0][0];
    eps[1] = grad_u[1][1];
    eps[2] = grad_u[2][2];
    eps[3] = 0.5 * (grad_u[0][1] + grad_u[1][0]);
    eps[4] = 0.5 * (grad_u[1][2] + grad_u[2][1]);
    eps[5] = 0.5 * (grad_u[0][2] + grad_u[2][0]);
    return eps;
}

/// σ = λ tr(ε) I + 2μ ε
template <class T>
SymStressT<T> hooke_stress(const SymStrainT<T>& eps, const MaterialParams& m) {
    const double lambda = m.lame_lambda();
    const double two_mu = 2.0 * m.lame_mu();
    const T volumetric = lambda * eps.trace();
    SymStressT<T> sigma;
    for (std::size_t i = 0; i < 3; ++i) {
        sigma[i] = volumetric + two_mu * eps[i];
    }
    for (std::size_t i = 3; i < 6; ++i) {
        sigma[i] = two_mu * eps[i];
    }
    return sigma;
}

/// ∇·σ + f
template <class T>
Vec3T<T> momentum_residual(const Vec3T<T>& div_sigma, const Vec3& body_force) {
    return {div_sigma[0] + body_force[0], div_sigma[1] + body_force[1], div_sigma[2] + body_force[2]};
}

/// σ - C:ε(∇u), componentwise in Voigt order.
template <class T>
std::array<T, 6> stress_coupling_residual(const SymStressT<T>& sigma_primary, const Mat3T<T>& grad_u,
                                          const MaterialParams& m) {
    const auto sigma_u = hooke_stress(strain_from_displacement_gradient(grad_u), m);
    std::array<T, 6> r;
    for (std::size_t i = 0; i < 6; ++i) {
        r[i] = sigma_primary[i] - sigma_u[i];
    }
    return r;
}

/// Divergence from d(σ_voigt[k])/d(x_j) = stress_jacobian[k][j].
template <class T>
Vec3T<T> divergence_of_stress(const std::array<std::array<T, 3>, 6>& stress_jacobian) {
    const auto& d = stress_jacobian;
    // xx yy zz xy yz xz
    return {d[0][0] + d[3][1] + d[5][2], d[3][0] + d[1][1] + d[4][2], d[5][0] + d[4][1] + d[2][2]};
}

} // namespace pinncontact
