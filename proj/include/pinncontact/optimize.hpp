#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pinncontact/loss.hpp"

namespace pinncontact::optimize {

struct AdamConfig {
    double lr = 1e-3;
    std::size_t epochs = 2000;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
};

struct LbfgsConfig {
    std::size_t memory = 50;
    std::size_t max_iterations = 15000;
    double gradient_norm_tol = 1e-8;
    /// Stop when |ΔL| <= loss_change_tol * max(|L|, 1).
    double loss_change_tol = 10.0 * 2.22e-16;
    double c1 = 1e-4;
    double c2 = 0.9;
    std::size_t max_line_search_evaluations = 40;

    void validate() const;
};

/// Objective value, gradient and an optional per-part breakdown.
struct Evaluation {
    double value = 0.0;
    Eigen::VectorXd gradient;
    std::vector<double> parts;
};

using Provider = std::function<Evaluation(const Eigen::VectorXd& theta)>;

struct LogEntry {
    std::size_t step = 0;
    std::string phase;
    std::vector<double> parts;
    double total = 0.0;
    double grad_norm = 0.0;
    double step_length = 0.0;
};

struct TrainingLog {
    std::vector<std::string> part_names;
    std::vector<LogEntry> entries;
    /// Called after every append (progress reporting).
    std::function<void(const LogEntry&)> observer;

    void append(LogEntry entry);

    /// Columns: step, phase, one per part, total, grad_norm, step_length.
    /// Every `interval`-th entry plus the last one is written.
    void write_csv(const std::filesystem::path& path, std::size_t interval = 1) const;
};

enum class Termination { gradient_tolerance, loss_change_tolerance, iteration_limit };

std::string to_string(Termination t);

struct RunResult {
    Eigen::VectorXd theta;
    std::size_t iterations = 0;
    double final_value = 0.0;
    Termination reason = Termination::iteration_limit;
};

/// Bias-corrected Adam for a fixed number of epochs. Entries are appended to
/// `log` as the run proceeds, so a partial log survives TrainingAborted.
RunResult adam_run(const Provider& provider, const Eigen::VectorXd& theta0, const AdamConfig& config,
                   TrainingLog& log);

/// Limited-memory BFGS (two-loop recursion) with a strong-Wolfe line search.
/// A failed line search is retried once along steepest descent; a second
/// consecutive failure ends the run as loss_change_tolerance (no decrease).
RunResult lbfgs_run(const Provider& provider, const Eigen::VectorXd& theta0, const LbfgsConfig& config,
                    TrainingLog& log);

struct TrainResult {
    ParameterVector theta;
    ParameterVector theta_init;
    TrainingLog log;
    Termination lbfgs_reason = Termination::iteration_limit;
    std::size_t adam_steps = 0;
    std::size_t lbfgs_iterations = 0;
    LossBreakdown final_loss;
};

/// Glorot init, then Adam, then L-BFGS on the problem's objective.
/// on_log is invoked after every appended log entry (may be empty).
TrainResult train(const ContactProblem& problem, std::uint64_t seed, const AdamConfig& adam,
                  const LbfgsConfig& lbfgs, const std::function<void(const LogEntry&)>& on_log = {});

/// Same as train but starting from the given parameters.
TrainResult train_from(const ContactProblem& problem, const ParameterVector& theta0, const AdamConfig& adam,
                       const LbfgsConfig& lbfgs, const std::function<void(const LogEntry&)>& on_log = {});

} // namespace pinncontact::optimize
