#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pinncontact/architecture.hpp"
#include "pinncontact/autodiff/tape.hpp"
#include "pinncontact/types.hpp"

namespace pinncontact::autodiff {

/// Raw network outputs at one point, recorded as tape leaves.
struct PointVars {
    Vec3 x{};
    std::size_t index = 0;
    std::array<Var, kOutputCount> value;
    /// d_dx[i][j] = d(output_i)/d(x_j)
    std::array<std::array<Var, kSpatialDim>, kOutputCount> d_dx;
};

/// Writes one residual per slot of `out`; all of them must be built on `tape`
/// from the leaves in `in` and constants.
using ResidualFn = std::function<void(Tape& tape, const PointVars& in, std::span<Var> out)>;

/// Weighted mean-square reduction over a point set:
///   sum_p sum_r scale(p, r) * residual_r(p)^2
/// where scale is typically weight_r / count_r. Each residual slot is charged
/// to one part of the objective.
struct ResidualBlock {
    std::string name;
    std::vector<Vec3> points;
    std::size_t residual_count = 0;
    std::vector<std::size_t> part_of_residual;
    /// Row-major points.size() x residual_count.
    std::vector<double> scale;
    ResidualFn residuals;

    /// Fills `scale` with weight_r / points.size() for every point.
    void set_uniform_scale(std::span<const double> weights);
};

/// A sum of residual blocks evaluated on one network.
struct Objective {
    std::vector<std::string> part_names;
    std::vector<ResidualBlock> blocks;

    void validate(std::size_t output_dim) const;
};

struct ObjectiveValue {
    double total = 0.0;
    std::vector<double> parts;
    Eigen::VectorXd gradient; ///< empty unless requested
};

struct EvaluationOptions {
    bool with_gradient = true;
    /// Points per forward/backward batch. Reductions run in batch order, so
    /// results do not depend on the number of worker threads.
    std::size_t batch_size = 256;
    /// 0 selects worker_thread_count().
    std::size_t threads = 0;
};

/// Value and exact gradient of an objective with respect to all network
/// parameters, including the dependence through spatial derivatives.
ObjectiveValue evaluate_objective(const Architecture& arch, const ParameterVector& params, const Objective& objective,
                                  const EvaluationOptions& options = {});

/// Gradient of a scalar function composed directly on θ.
using ParameterFn = std::function<Var(Tape& tape, std::span<const Var> theta)>;
ObjectiveValue loss_gradient(const ParameterVector& params, const ParameterFn& objective);

/// Worker threads for point-parallel work: PINNCONTACT_THREADS if set,
/// otherwise the hardware concurrency.
std::size_t worker_thread_count();

} // namespace pinncontact::autodiff
