#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pinncontact/harness/config.hpp"
#include "pinncontact/loss.hpp"
#include "pinncontact/optimize.hpp"

namespace pinncontact::harness {

struct KktStats {
    double min_gap = 0.0;
    double max_pressure = 0.0;
    double max_complementarity = 0.0;
};

struct BenchmarkReport {
    static constexpr int kSchemaVersion = 1;

    Benchmark benchmark = Benchmark::patch;
    bool data_enhanced = false;
    std::uint64_t seed = 0;
    /// Field name and percentage, in reporting order.
    std::vector<std::pair<std::string, double>> rel_l2;
    /// Largest |p_n| over the contact points.
    double max_contact_pressure = 0.0;
    KktStats kkt;
    LossBreakdown final_loss;
    std::string lbfgs_reason;
    std::size_t adam_steps = 0;
    std::size_t lbfgs_iterations = 0;
    std::map<std::string, std::string> artifacts;

    double error(const std::string& field) const;
};

/// Training problem for the configured benchmark (evaluation points excluded).
/// Hertz problems always carry the data lines; use_data follows data_enhanced.
ContactProblem build_problem(const RunConfig& config);

/// Patch: 21³ lattice. Hertz: the x = 0 line at the evaluation depth.
PointSet evaluation_set(const RunConfig& config);

/// Transformed network fields at the given points.
std::vector<MixedField> predict(const ParameterVector& theta, const Architecture& arch,
                                const OutputTransform& transform, std::span<const Vec3> points);

/// Analytical reference at the evaluation points and the scored fields:
/// patch (ux, uy, uz, syy), hertz (sxx, syy, szz, tau_max).
std::vector<std::pair<std::string, double>> field_errors(const RunConfig& config, std::span<const Vec3> points,
                                                         std::span<const MixedField> fields);

KktStats kkt_stats(const ContactProblem& problem, const ParameterVector& theta, double* max_pressure = nullptr);

/// Report for a given parameter vector (no training, no files).
BenchmarkReport evaluate(const RunConfig& config, const ParameterVector& theta);

struct RunOutcome {
    BenchmarkReport report;
    optimize::TrainResult training;
};

/// Samples, trains, scores and (if write_artifacts) writes config, log,
/// fields, report and checkpoint into config.output_dir. A TrainingAborted
/// still leaves the partial training log on disk before propagating.
RunOutcome run_benchmark(const RunConfig& config, const std::function<void(const optimize::LogEntry&)>& on_log = {},
                         bool write_artifacts = true);

} // namespace pinncontact::harness
