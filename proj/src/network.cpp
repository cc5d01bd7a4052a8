#include "pinncontact/network.hpp"

#include <cmath>
#include <random>

#include "pinncontact/autodiff/mlp_jacobian.hpp"
#include "pinncontact/error.hpp"

namespace pinncontact {

ParameterVector init_glorot_uniform(const Architecture& arch, std::uint64_t seed) {
    arch.validate();
    ParameterVector params = ParameterVector::Zero(static_cast<Eigen::Index>(arch.parameter_count()));
    std::mt19937_64 rng(seed);
    for (const auto& layer : arch.layers()) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.fan_in + layer.fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (std::size_t k = 0; k < layer.fan_in * layer.fan_out; ++k) {
            double w = dist(rng);
            while (w == -limit) {
                w = dist(rng);
            }
            params[static_cast<Eigen::Index>(layer.weight_offset + k)] = w;
        }
    }
    return params;
}

Eigen::VectorXd forward(const ParameterVector& params, const Architecture& arch, const Vec3& x) {
    arch.check_parameters(params);
    if (arch.input_dim != kSpatialDim) {
        throw ConfigurationError("forward: network input must be 3-dimensional");
    }
    Eigen::VectorXd a(3);
    a << x[0], x[1], x[2];
    const auto layers = arch.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        Eigen::Map<const Eigen::MatrixXd> w(params.data() + layer.weight_offset,
                                            static_cast<Eigen::Index>(layer.fan_out),
                                            static_cast<Eigen::Index>(layer.fan_in));
        Eigen::Map<const Eigen::VectorXd> b(params.data() + layer.bias_offset,
                                            static_cast<Eigen::Index>(layer.fan_out));
        Eigen::VectorXd z = w * a + b;
        if (l + 1 < layers.size()) {
            a = z.array().tanh().matrix();
        } else {
            a = std::move(z);
        }
    }
    return a;
}

OutputTransform::OutputTransform() = default;

double OutputTransform::multiplier(std::size_t i, const Vec3& x) const {
    double m = 1.0;
    for (const auto& f : channels_[i].factors) {
        m *= f(x);
    }
    return m;
}

Vec3 OutputTransform::multiplier_gradient(std::size_t i, const Vec3& x) const {
    const auto& factors = channels_[i].factors;
    Vec3 g{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < factors.size(); ++k) {
        double others = 1.0;
        for (std::size_t q = 0; q < factors.size(); ++q) {
            if (q != k) {
                others *= factors[q](x);
            }
        }
        const Vec3 dk = factors[k].gradient(x);
        for (std::size_t j = 0; j < 3; ++j) {
            g[j] += others * dk[j];
        }
    }
    return g;
}

OutputTransform patch_transform(double l, double h, double w, double p) {
    const auto X = Polynomial::coordinate(0);
    const auto Y = Polynomial::coordinate(1);
    const auto Z = Polynomial::coordinate(2);
    const auto l_minus_x = Polynomial::constant(l) - X;
    const auto h_minus_y = Polynomial::constant(h) - Y;
    const auto w_minus_z = Polynomial::constant(w) - Z;

    OutputTransform t;
    t.channel(kUx).factors = {X};
    t.channel(kUz).factors = {Z};
    t.channel(kSxx).factors = {l_minus_x};
    t.channel(kSyy).factors = {h_minus_y};
    t.channel(kSyy).offset = Polynomial::constant(-p);
    t.channel(kSzz).factors = {w_minus_z};
    t.channel(kSxy).factors = {X, h_minus_y, l_minus_x};
    t.channel(kSyz).factors = {Z, h_minus_y, w_minus_z};
    t.channel(kSxz).factors = {X, Z, l_minus_x, w_minus_z};
    return t;
}

OutputTransform hertz_transform(double young, double p, double w) {
    const auto X = Polynomial::coordinate(0);
    const auto Y = Polynomial::coordinate(1);
    const auto Z = Polynomial::coordinate(2);
    const auto w_plus_z = Polynomial::constant(w) + Z;
    const auto inv_e = Polynomial::constant(1.0 / young);

    OutputTransform t;
    t.channel(kUx).factors = {X, inv_e};
    t.channel(kUy).factors = {inv_e};
    t.channel(kUz).factors = {Z, w_plus_z, inv_e};
    t.channel(kSyy).factors = {-1.0 * Y};
    t.channel(kSyy).offset = Polynomial::constant(-p);
    t.channel(kSxy).factors = {X, Y};
    t.channel(kSyz).factors = {w_plus_z, Z, Y};
    t.channel(kSxz).factors = {w_plus_z, Z, X};
    return t;
}

TransformedField transformed_field_with_jacobian(const ParameterVector& params, const Architecture& arch,
                                                 const OutputTransform& transform, const Vec3& x) {
    if (arch.output_dim != kOutputCount) {
        throw ConfigurationError("output transform expects 9 network outputs");
    }
    const auto raw = autodiff::evaluate_with_jacobian(arch, params, x);
    std::array<double, kOutputCount> values{};
    std::array<std::array<double, kSpatialDim>, kOutputCount> d_dx{};
    for (std::size_t i = 0; i < kOutputCount; ++i) {
        values[i] = raw.values[static_cast<Eigen::Index>(i)];
        for (std::size_t j = 0; j < kSpatialDim; ++j) {
            d_dx[i][j] = raw.d_dx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    const auto out = apply_transform<double>(transform, x, values, d_dx);
    TransformedField result;
    result.field = out.field();
    result.values = out.value;
    for (std::size_t i = 0; i < kOutputCount; ++i) {
        for (std::size_t j = 0; j < kSpatialDim; ++j) {
            result.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out.d_dx[i][j];
        }
    }
    return result;
}

} // namespace pinncontact
