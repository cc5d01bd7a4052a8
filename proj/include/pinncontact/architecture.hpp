#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace pinncontact {

/// Flattened weights and biases, layer by layer: W (fan_out x fan_in,
/// column-major) followed by b (fan_out).
using ParameterVector = Eigen::VectorXd;

/// Fully connected tanh network with a linear output layer.
struct Architecture {
    std::size_t input_dim = 3;
    std::size_t hidden_layers = 5;
    std::size_t hidden_width = 50;
    std::size_t output_dim = 9;

    struct Layer {
        std::size_t fan_in;
        std::size_t fan_out;
        std::size_t weight_offset;
        std::size_t bias_offset;
    };

    /// Affine layers in evaluation order; the last one is the output layer.
    std::vector<Layer> layers() const;
    std::size_t parameter_count() const;

    /// Throws ConfigurationError on zero sizes or a mismatched parameter length.
    void validate() const;
    void check_parameters(const ParameterVector& params) const;

    bool operator==(const Architecture&) const = default;
};

} // namespace pinncontact
