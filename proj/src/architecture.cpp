#include "pinncontact/architecture.hpp"

#include <string>

#include "pinncontact/error.hpp"

namespace pinncontact {

std::vector<Architecture::Layer> Architecture::layers() const {
    std::vector<Layer> out;
    out.reserve(hidden_layers + 1);
    std::size_t offset = 0;
    std::size_t fan_in = input_dim;
    for (std::size_t l = 0; l <= hidden_layers; ++l) {
        const std::size_t fan_out = l == hidden_layers ? output_dim : hidden_width;
        Layer layer{fan_in, fan_out, offset, offset + fan_in * fan_out};
        offset = layer.bias_offset + fan_out;
        out.push_back(layer);
        fan_in = fan_out;
    }
    return out;
}

std::size_t Architecture::parameter_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers()) {
        total += layer.fan_in * layer.fan_out + layer.fan_out;
    }
    return total;
}

void Architecture::validate() const {
    if (input_dim == 0 || output_dim == 0) {
        throw ConfigurationError("architecture: input and output dimensions must be positive");
    }
    if (hidden_layers > 0 && hidden_width == 0) {
        throw ConfigurationError("architecture: hidden width must be positive");
    }
}

void Architecture::check_parameters(const ParameterVector& params) const {
    validate();
    const auto expected = parameter_count();
    if (static_cast<std::size_t>(params.size()) != expected) {
        throw ConfigurationError("parameter vector has length " + std::to_string(params.size()) +
                                 ", architecture expects " + std::to_string(expected));
    }
}

} // namespace pinncontact
