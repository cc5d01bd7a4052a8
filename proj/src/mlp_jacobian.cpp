#include "pinncontact/autodiff/mlp_jacobian.hpp"

#include <cmath>

#include "pinncontact/error.hpp"

namespace pinncontact::autodiff {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

Eigen::Map<const MatrixXd> weights(const ParameterVector& params, const Architecture::Layer& layer) {
    return {params.data() + layer.weight_offset, static_cast<Index>(layer.fan_out), static_cast<Index>(layer.fan_in)};
}

Eigen::Map<const Eigen::VectorXd> bias(const ParameterVector& params, const Architecture::Layer& layer) {
    return {params.data() + layer.bias_offset, static_cast<Index>(layer.fan_out)};
}

} // namespace

void forward_tangent(const Architecture& arch, const ParameterVector& params, std::span<const Vec3> points,
                     TangentCache& cache) {
    arch.check_parameters(params);
    if (arch.input_dim != kSpatialDim) {
        throw ConfigurationError("spatial Jacobians need a 3-dimensional input layer");
    }
    const auto layers = arch.layers();
    const Index n = static_cast<Index>(points.size());
    cache.n = n;
    cache.layer_inputs.resize(layers.size());
    cache.hidden_dz.resize(layers.size() - 1);

    MatrixXd& input = cache.layer_inputs[0];
    input.setZero(3, 4 * n);
    for (Index p = 0; p < n; ++p) {
        for (Index j = 0; j < 3; ++j) {
            input(j, p) = points[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
            input(j, (j + 1) * n + p) = 1.0;
        }
    }

    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        const auto w = weights(params, layer);
        const auto b = bias(params, layer);
        const MatrixXd& in = cache.layer_inputs[l];
        const bool is_output = l + 1 == layers.size();
        MatrixXd& out = is_output ? cache.output : cache.layer_inputs[l + 1];
        out.noalias() = w * in;
        out.leftCols(n).colwise() += b;
        if (is_output) {
            break;
        }
        MatrixXd& dz = cache.hidden_dz[l];
        dz = out.rightCols(3 * n);
        out.leftCols(n) = out.leftCols(n).array().tanh().matrix();
        const auto slope = (1.0 - out.leftCols(n).array().square()).eval();
        for (Index j = 1; j <= 3; ++j) {
            out.middleCols(j * n, n).array() *= slope;
        }
    }
}

void backward_tangent(const Architecture& arch, const ParameterVector& params, const TangentCache& cache,
                      const MatrixXd& output_adjoint, Eigen::Ref<Eigen::VectorXd> grad) {
    const auto layers = arch.layers();
    const Index n = cache.n;
    if (output_adjoint.rows() != static_cast<Index>(arch.output_dim) || output_adjoint.cols() != 4 * n) {
        throw ConfigurationError("output adjoint does not match the cached batch");
    }
    if (grad.size() != params.size()) {
        throw ConfigurationError("gradient buffer does not match the parameter vector");
    }

    MatrixXd zbar = output_adjoint;
    MatrixXd abar;
    for (std::size_t l = layers.size(); l-- > 0;) {
        const auto& layer = layers[l];
        const MatrixXd& in = cache.layer_inputs[l];
        if (l + 1 < layers.size()) {
            // abar holds the adjoint of this layer's stacked output [a' | s*dz_j].
            const auto act = cache.layer_inputs[l + 1].leftCols(n).array();
            const auto slope = (1.0 - act.square()).eval();
            const MatrixXd& dz = cache.hidden_dz[l];
            Eigen::ArrayXXd slope_bar = Eigen::ArrayXXd::Zero(slope.rows(), n);
            zbar.resize(abar.rows(), 4 * n);
            for (Index j = 0; j < 3; ++j) {
                const auto ab = abar.middleCols((j + 1) * n, n).array();
                slope_bar += ab * dz.middleCols(j * n, n).array();
                zbar.middleCols((j + 1) * n, n).array() = ab * slope;
            }
            zbar.leftCols(n).array() = (abar.leftCols(n).array() - 2.0 * act * slope_bar) * slope;
        }
        Eigen::Map<MatrixXd> dw(grad.data() + layer.weight_offset, static_cast<Index>(layer.fan_out),
                                static_cast<Index>(layer.fan_in));
        dw.noalias() += zbar * in.transpose();
        Eigen::Map<Eigen::VectorXd> db(grad.data() + layer.bias_offset, static_cast<Index>(layer.fan_out));
        db += zbar.leftCols(n).rowwise().sum();
        if (l > 0) {
            abar.noalias() = weights(params, layer).transpose() * zbar;
        }
    }
}

JacobianAtPoint evaluate_with_jacobian(const Architecture& arch, const ParameterVector& params, const Vec3& x) {
    for (double c : x) {
        if (!std::isfinite(c)) {
            throw ConfigurationError("evaluate_with_jacobian: non-finite coordinate");
        }
    }
    TangentCache cache;
    forward_tangent(arch, params, std::span<const Vec3>(&x, 1), cache);
    JacobianAtPoint out;
    const auto m = static_cast<Index>(arch.output_dim);
    out.values = cache.output.col(0);
    out.d_dx.resize(m, 3);
    for (Index j = 0; j < 3; ++j) {
        out.d_dx.col(j) = cache.output.col(j + 1);
    }
    return out;
}

} // namespace pinncontact::autodiff
