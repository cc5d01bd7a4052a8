#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pinncontact/architecture.hpp"
#include "pinncontact/autodiff/tape.hpp"
#include "pinncontact/elasticity.hpp"
#include "pinncontact/polynomial.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact {

/// Weights ~ U(-L, L) with L = sqrt(6 / (fan_in + fan_out)); biases zero.
ParameterVector init_glorot_uniform(const Architecture& arch, std::uint64_t seed);

/// Plain forward pass: raw outputs at x.
Eigen::VectorXd forward(const ParameterVector& params, const Architecture& arch, const Vec3& x);

/// Hard-constraint map applied to each raw output:
///   out_i(x) = m_i(x) * raw_i(x) + a_i(x),
/// where m_i is a product of polynomial factors (kept factored so that a
/// vanishing factor gives an exact zero) and a_i a polynomial offset.
class OutputTransform {
public:
    struct Channel {
        std::vector<Polynomial> factors;
        Polynomial offset;
    };

    /// Identity on all nine outputs.
    OutputTransform();

    Channel& channel(std::size_t i) { return channels_.at(i); }
    const Channel& channel(std::size_t i) const { return channels_.at(i); }

    double multiplier(std::size_t i, const Vec3& x) const;
    Vec3 multiplier_gradient(std::size_t i, const Vec3& x) const;
    double offset(std::size_t i, const Vec3& x) const { return channels_[i].offset(x); }
    Vec3 offset_gradient(std::size_t i, const Vec3& x) const { return channels_[i].offset.gradient(x); }

private:
    std::array<Channel, kOutputCount> channels_;
};

/// Unit-cube patch test: u_x = x ũ_x, u_z = z ũ_z, σ_yy = -p + (h-y) σ̃_yy and
/// the remaining traction-free faces.
OutputTransform patch_transform(double l = 1.0, double h = 1.0, double w = 1.0, double p = 0.1);

/// Quarter cylinder: displacements scaled by 1/E, symmetry and plane-strain
/// faces imposed, σ_xx and σ_zz left raw.
OutputTransform hertz_transform(double young = 200.0, double p = 0.5, double w = 1.0);

/// Transformed fields and their spatial Jacobian; row i of the Jacobian is
/// d(out_i)/dx in channel order (u, then Voigt stress).
struct TransformedField {
    MixedField field;
    Eigen::Matrix<double, 9, 3> jacobian;
    std::array<double, kOutputCount> values;
};

TransformedField transformed_field_with_jacobian(const ParameterVector& params, const Architecture& arch,
                                                 const OutputTransform& transform, const Vec3& x);

/// Applies the transform to raw values and their derivatives.
/// Works on doubles or tape variables.
template <class T>
struct TransformedOutputs {
    std::array<T, kOutputCount> value;
    std::array<std::array<T, kSpatialDim>, kOutputCount> d_dx;

    MixedFieldT<T> field() const {
        MixedFieldT<T> f;
        for (std::size_t i = 0; i < 3; ++i) {
            f.u[i] = value[i];
        }
        for (std::size_t i = 0; i < 6; ++i) {
            f.sigma[i] = value[3 + i];
        }
        return f;
    }
    Mat3T<T> displacement_gradient() const {
        Mat3T<T> g;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                g[i][j] = d_dx[i][j];
            }
        }
        return g;
    }
    std::array<std::array<T, 3>, 6> stress_jacobian() const {
        std::array<std::array<T, 3>, 6> s;
        for (std::size_t k = 0; k < 6; ++k) {
            s[k] = d_dx[3 + k];
        }
        return s;
    }
};

template <class T>
TransformedOutputs<T> apply_transform(const OutputTransform& transform, const Vec3& x,
                                      const std::array<T, kOutputCount>& raw,
                                      const std::array<std::array<T, kSpatialDim>, kOutputCount>& raw_d_dx) {
    TransformedOutputs<T> out;
    for (std::size_t i = 0; i < kOutputCount; ++i) {
        const double m = transform.multiplier(i, x);
        const Vec3 dm = transform.multiplier_gradient(i, x);
        const double a = transform.offset(i, x);
        const Vec3 da = transform.offset_gradient(i, x);
        out.value[i] = m * raw[i] + a;
        for (std::size_t j = 0; j < kSpatialDim; ++j) {
            // product rule: d(m r + a) = dm r + m dr + da
            out.d_dx[i][j] = dm[j] * raw[i] + m * raw_d_dx[i][j] + da[j];
        }
    }
    return out;
}

} // namespace pinncontact
