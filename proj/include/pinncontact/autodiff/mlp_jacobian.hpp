#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "pinncontact/architecture.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact::autodiff {

/// Raw network outputs at one point and their spatial Jacobian
/// d_dx(i, j) = d(output_i)/d(x_j).
struct JacobianAtPoint {
    Eigen::VectorXd values;
    Eigen::MatrixXd d_dx;
};

/// Activations of a forward pass carrying three spatial tangents per point.
///
/// Every layer input is stored as a stacked matrix [a | da/dx | da/dy | da/dz]
/// of shape fan_in x 4n; the tangent pre-activations of hidden layers are kept
/// for the reverse sweep.
struct TangentCache {
    Eigen::Index n = 0;
    std::vector<Eigen::MatrixXd> layer_inputs;
    std::vector<Eigen::MatrixXd> hidden_dz;
    /// output_dim x 4n, same stacking as the layer inputs.
    Eigen::MatrixXd output;

    double value(Eigen::Index channel, Eigen::Index point) const { return output(channel, point); }
    double derivative(Eigen::Index channel, Eigen::Index point, Eigen::Index axis) const {
        return output(channel, (axis + 1) * n + point);
    }
};

/// Forward pass with exact first spatial derivatives for a batch of points.
void forward_tangent(const Architecture& arch, const ParameterVector& params, std::span<const Vec3> points,
                     TangentCache& cache);

/// Reverse sweep over the parameters. output_adjoint has the stacked layout of
/// TangentCache::output and holds dL/d(value) and dL/d(d value/dx_j). The
/// resulting dL/dθ is added into grad.
void backward_tangent(const Architecture& arch, const ParameterVector& params, const TangentCache& cache,
                      const Eigen::MatrixXd& output_adjoint, Eigen::Ref<Eigen::VectorXd> grad);

/// Single-point convenience wrapper around forward_tangent.
JacobianAtPoint evaluate_with_jacobian(const Architecture& arch, const ParameterVector& params, const Vec3& x);

} // namespace pinncontact::autodiff
