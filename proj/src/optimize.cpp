#include "pinncontact/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "pinncontact/error.hpp"

namespace pinncontact::optimize {

void AdamConfig::validate() const {
    if (!(lr > 0.0)) {
        throw ConfigurationError("Adam learning rate must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
        throw ConfigurationError("Adam moments must lie in [0, 1) and epsilon must be positive");
    }
}

void LbfgsConfig::validate() const {
    if (memory < 1) {
        throw ConfigurationError("L-BFGS memory must be at least 1");
    }
    if (!(gradient_norm_tol > 0.0) || !(loss_change_tol >= 0.0)) {
        throw ConfigurationError("L-BFGS tolerances must be positive");
    }
    if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) {
        throw ConfigurationError("Wolfe constants need 0 < c1 < c2 < 1");
    }
}

std::string to_string(Termination t) {
    switch (t) {
    case Termination::gradient_tolerance:
        return "gradient_tolerance";
    case Termination::loss_change_tolerance:
        return "loss_change_tolerance";
    case Termination::iteration_limit:
        return "iteration_limit";
    }
    return "unknown";
}

void TrainingLog::append(LogEntry entry) {
    entries.push_back(std::move(entry));
    if (observer) {
        observer(entries.back());
    }
}

void TrainingLog::write_csv(const std::filesystem::path& path, std::size_t interval) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    interval = std::max<std::size_t>(1, interval);
    out << "step,phase";
    for (const auto& name : part_names) {
        out << ',' << name;
    }
    out << ",total,grad_norm,step_length\n";
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (k % interval != 0 && k + 1 != entries.size()) {
            continue;
        }
        const auto& e = entries[k];
        out << e.step << ',' << e.phase;
        for (std::size_t i = 0; i < part_names.size(); ++i) {
            out << ',' << fmt::format("{:.17g}", i < e.parts.size() ? e.parts[i] : 0.0);
        }
        out << fmt::format(",{:.17g},{:.17g},{:.17g}\n", e.total, e.grad_norm, e.step_length);
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

namespace {

Evaluation checked(const Provider& provider, const Eigen::VectorXd& theta, const char* phase, std::size_t step) {
    Evaluation e = provider(theta);
    if (!std::isfinite(e.value) || !e.gradient.allFinite()) {
        throw TrainingAborted(fmt::format("{}: non-finite objective or gradient at step {} (loss = {})", phase, step,
                                          e.value));
    }
    if (e.gradient.size() != theta.size()) {
        throw ConfigurationError("provider returned a gradient of the wrong length");
    }
    return e;
}

std::size_t next_step(const TrainingLog& log) {
    return log.entries.empty() ? 0 : log.entries.back().step + 1;
}

LogEntry entry_for(std::size_t step, const char* phase, const Evaluation& e, double step_length) {
    LogEntry entry;
    entry.step = step;
    entry.phase = phase;
    entry.parts = e.parts;
    entry.total = e.value;
    entry.grad_norm = e.gradient.norm();
    entry.step_length = step_length;
    return entry;
}

/// Point on the search ray with its function value and directional slope.
struct LinePoint {
    double alpha = 0.0;
    double value = 0.0;
    double slope = 0.0;
    Evaluation eval;
};

/// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db),
/// safeguarded to the inner 80% of the bracket.
double cubic_step(const LinePoint& a, const LinePoint& b) {
    const double lo = std::min(a.alpha, b.alpha);
    const double hi = std::max(a.alpha, b.alpha);
    const double margin = 0.1 * (hi - lo);
    const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    double t = 0.5 * (lo + hi);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
        const double denom = b.slope - a.slope + 2.0 * d2;
        if (denom != 0.0) {
            const double cand = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
            if (std::isfinite(cand)) {
                t = cand;
            }
        }
    }
    return std::clamp(t, lo + margin, hi - margin);
}

class StrongWolfe {
public:
    StrongWolfe(const Provider& provider, const LbfgsConfig& cfg, const Eigen::VectorXd& x,
                const Eigen::VectorXd& direction, const Evaluation& at_zero)
        : provider_(provider), cfg_(cfg), x_(x), d_(direction) {
        origin_.alpha = 0.0;
        origin_.value = at_zero.value;
        origin_.slope = at_zero.gradient.dot(direction);
    }

    /// Accepted point, or nothing when no strong-Wolfe step was found.
    std::optional<LinePoint> search(double alpha_init) {
        if (!(origin_.slope < 0.0)) {
            return std::nullopt;
        }
        LinePoint prev = origin_;
        double alpha = alpha_init;
        for (std::size_t i = 0; evaluations_ < cfg_.max_line_search_evaluations; ++i) {
            LinePoint cur = probe(alpha);
            if (!std::isfinite(cur.value)) {
                alpha = 0.5 * (prev.alpha + alpha);
                continue;
            }
            if (!sufficient_decrease(cur) || (i > 0 && cur.value >= prev.value)) {
                return zoom(prev, cur);
            }
            if (std::abs(cur.slope) <= -cfg_.c2 * origin_.slope) {
                return cur;
            }
            if (cur.slope >= 0.0) {
                return zoom(cur, prev);
            }
            prev = std::move(cur);
            alpha *= 2.0;
        }
        return std::nullopt;
    }

private:
    bool sufficient_decrease(const LinePoint& p) const {
        return p.value <= origin_.value + cfg_.c1 * p.alpha * origin_.slope;
    }

    LinePoint probe(double alpha) {
        ++evaluations_;
        LinePoint p;
        p.alpha = alpha;
        p.eval = provider_(x_ + alpha * d_);
        p.value = p.eval.value;
        p.slope = p.eval.gradient.size() == d_.size() ? p.eval.gradient.dot(d_)
                                                      : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(p.slope)) {
            p.value = std::numeric_limits<double>::quiet_NaN();
        }
        return p;
    }

    std::optional<LinePoint> zoom(LinePoint lo, LinePoint hi) {
        while (evaluations_ < cfg_.max_line_search_evaluations) {
            if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) {
                break;
            }
            LinePoint cur = probe(cubic_step(lo, hi));
            if (!std::isfinite(cur.value) || !sufficient_decrease(cur) || cur.value >= lo.value) {
                hi = std::move(cur);
                if (!std::isfinite(hi.value)) {
                    hi.value = std::numeric_limits<double>::max();
                    hi.slope = 0.0;
                }
                continue;
            }
            if (std::abs(cur.slope) <= -cfg_.c2 * origin_.slope) {
                return cur;
            }
            if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) {
                hi = lo;
            }
            lo = std::move(cur);
        }
        // Accept the best sufficient-decrease point if the bracket collapsed.
        if (lo.alpha > 0.0 && sufficient_decrease(lo) && lo.value < origin_.value) {
            return lo;
        }
        return std::nullopt;
    }

    const Provider& provider_;
    const LbfgsConfig& cfg_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& d_;
    LinePoint origin_;
    std::size_t evaluations_ = 0;
};

/// H·g via the two-loop recursion, with H0 = γI, γ = sᵀy / yᵀy of the newest pair.
Eigen::VectorXd two_loop(const std::deque<Eigen::VectorXd>& s, const std::deque<Eigen::VectorXd>& y,
                         const std::deque<double>& rho, const Eigen::VectorXd& g) {
    Eigen::VectorXd q = g;
    const std::size_t m = s.size();
    std::vector<double> alpha(m);
    for (std::size_t i = m; i-- > 0;) {
        alpha[i] = rho[i] * s[i].dot(q);
        q -= alpha[i] * y[i];
    }
    if (m > 0) {
        q *= s[m - 1].dot(y[m - 1]) / y[m - 1].squaredNorm();
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double beta = rho[i] * y[i].dot(q);
        q += (alpha[i] - beta) * s[i];
    }
    return q;
}

} // namespace

RunResult adam_run(const Provider& provider, const Eigen::VectorXd& theta0, const AdamConfig& config,
                   TrainingLog& log) {
    config.validate();
    RunResult result;
    result.theta = theta0;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(theta0.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(theta0.size());
    double beta1_t = 1.0;
    double beta2_t = 1.0;
    const std::size_t base = next_step(log);
    for (std::size_t t = 0; t < config.epochs; ++t) {
        const Evaluation e = checked(provider, result.theta, "adam", base + t);
        m = config.beta1 * m + (1.0 - config.beta1) * e.gradient;
        v = config.beta2 * v + (1.0 - config.beta2) * e.gradient.cwiseAbs2();
        beta1_t *= config.beta1;
        beta2_t *= config.beta2;
        const double c1 = 1.0 / (1.0 - beta1_t);
        const double c2 = 1.0 / (1.0 - beta2_t);
        const Eigen::VectorXd update =
            config.lr * ((c1 * m).array() / ((c2 * v).array().sqrt() + config.epsilon)).matrix();
        result.theta -= update;
        log.append(entry_for(base + t, "adam", e, update.norm()));
        result.final_value = e.value;
        ++result.iterations;
    }
    return result;
}

RunResult lbfgs_run(const Provider& provider, const Eigen::VectorXd& theta0, const LbfgsConfig& config,
                    TrainingLog& log) {
    config.validate();
    RunResult result;
    result.theta = theta0;
    const std::size_t base = next_step(log);
    Evaluation current = checked(provider, result.theta, "lbfgs", base);
    result.final_value = current.value;
    log.append(entry_for(base, "lbfgs", current, 0.0));

    std::deque<Eigen::VectorXd> s_hist;
    std::deque<Eigen::VectorXd> y_hist;
    std::deque<double> rho_hist;
    bool previous_failed = false;

    if (current.gradient.norm() < config.gradient_norm_tol) {
        result.reason = Termination::gradient_tolerance;
        return result;
    }
    while (result.iterations < config.max_iterations) {
        Eigen::VectorXd direction = -two_loop(s_hist, y_hist, rho_hist, current.gradient);
        if (!(direction.dot(current.gradient) < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            direction = -current.gradient;
        }
        const double alpha0 = s_hist.empty() ? std::min(1.0, 1.0 / current.gradient.norm()) : 1.0;
        StrongWolfe search(provider, config, result.theta, direction, current);
        auto accepted = search.search(alpha0);
        if (!accepted) {
            if (previous_failed || s_hist.empty()) {
                // Steepest descent failed as well: no further decrease is attainable.
                result.reason = Termination::loss_change_tolerance;
                return result;
            }
            previous_failed = true;
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            continue;
        }
        previous_failed = false;

        Eigen::VectorXd step = accepted->alpha * direction;
        Evaluation next = std::move(accepted->eval);
        if (!std::isfinite(next.value) || !next.gradient.allFinite()) {
            throw TrainingAborted(fmt::format("lbfgs: non-finite objective at iteration {}", result.iterations));
        }
        Eigen::VectorXd y = next.gradient - current.gradient;
        const double sy = step.dot(y);
        if (sy > 1e-10 * step.norm() * y.norm()) {
            if (s_hist.size() == config.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
            s_hist.push_back(step);
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
        }
        result.theta += step;
        ++result.iterations;
        const double change = std::abs(next.value - current.value);
        const double scale = std::max({std::abs(current.value), std::abs(next.value), 1.0});
        current = std::move(next);
        result.final_value = current.value;
        log.append(entry_for(base + result.iterations, "lbfgs", current, step.norm()));

        if (current.gradient.norm() < config.gradient_norm_tol) {
            result.reason = Termination::gradient_tolerance;
            return result;
        }
        if (change <= config.loss_change_tol * scale) {
            result.reason = Termination::loss_change_tolerance;
            return result;
        }
    }
    result.reason = Termination::iteration_limit;
    return result;
}

TrainResult train_from(const ContactProblem& problem, const ParameterVector& theta0, const AdamConfig& adam,
                       const LbfgsConfig& lbfgs, const std::function<void(const LogEntry&)>& on_log) {
    problem.arch.check_parameters(theta0);
    const auto objective = build_objective(problem);
    const Provider provider = [&](const Eigen::VectorXd& theta) {
        auto loss = evaluate_loss(objective, problem.arch, theta, true);
        Evaluation e;
        e.value = loss.breakdown.total;
        e.gradient = std::move(loss.gradient);
        const auto parts = loss.breakdown.parts();
        e.parts.assign(parts.begin(), parts.end());
        return e;
    };

    TrainResult out;
    out.theta_init = theta0;
    out.log.part_names.assign(loss_part_names().begin(), loss_part_names().end());
    out.log.observer = on_log;

    const auto adam_result = adam_run(provider, theta0, adam, out.log);
    out.adam_steps = adam_result.iterations;
    out.theta = adam_result.theta;
    if (lbfgs.max_iterations > 0) {
        const auto lb = lbfgs_run(provider, out.theta, lbfgs, out.log);
        out.theta = lb.theta;
        out.lbfgs_iterations = lb.iterations;
        out.lbfgs_reason = lb.reason;
    }
    out.final_loss = evaluate_loss(objective, problem.arch, out.theta, false).breakdown;
    out.log.observer = nullptr;
    return out;
}

TrainResult train(const ContactProblem& problem, std::uint64_t seed, const AdamConfig& adam,
                  const LbfgsConfig& lbfgs, const std::function<void(const LogEntry&)>& on_log) {
    return train_from(problem, init_glorot_uniform(problem.arch, seed), adam, lbfgs, on_log);
}

} // namespace pinncontact::optimize
