#include "pinncontact/harness/metrics.hpp"

#include <cmath>

#include "pinncontact/error.hpp"
#include "pinncontact/geometry.hpp"

namespace pinncontact::harness {

double relative_l2(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size() || truth.empty()) {
        throw ConfigurationError("relative_l2: inputs must be non-empty and of equal length");
    }
    double diff = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        diff += (pred[i] - truth[i]) * (pred[i] - truth[i]);
        norm += truth[i] * truth[i];
    }
    if (norm == 0.0) {
        throw DomainError("relative_l2: undefined for an all-zero reference");
    }
    return 100.0 * std::sqrt(diff) / std::sqrt(norm);
}

PolarStress polar_stress(const Vec3& x, const SymStress& sigma) {
    const double t = HertzDomain::polar_angle(x);
    const double s = std::sin(t);
    const double c = std::cos(t);
    PolarStress out{};
    out.srr = s * s * sigma[0] + c * c * sigma[1] - 2.0 * s * c * sigma[3];
    out.stt = c * c * sigma[0] + s * s * sigma[1] + 2.0 * s * c * sigma[3];
    return out;
}

} // namespace pinncontact::harness
