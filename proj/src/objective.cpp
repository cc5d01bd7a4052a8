#include "pinncontact/autodiff/objective.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "pinncontact/autodiff/mlp_jacobian.hpp"
#include "pinncontact/error.hpp"

namespace pinncontact::autodiff {

void ResidualBlock::set_uniform_scale(std::span<const double> weights) {
    if (weights.size() != residual_count) {
        throw ConfigurationError("block '" + name + "': expected " + std::to_string(residual_count) + " weights");
    }
    scale.assign(points.size() * residual_count, 0.0);
    if (points.empty()) {
        return;
    }
    const double inv = 1.0 / static_cast<double>(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t r = 0; r < residual_count; ++r) {
            scale[p * residual_count + r] = weights[r] * inv;
        }
    }
}

void Objective::validate(std::size_t output_dim) const {
    if (output_dim != kOutputCount) {
        throw ConfigurationError("objective blocks expect a network with 9 outputs");
    }
    for (const auto& block : blocks) {
        if (!block.residuals) {
            throw ConfigurationError("block '" + block.name + "' has no residual function");
        }
        if (block.part_of_residual.size() != block.residual_count) {
            throw ConfigurationError("block '" + block.name + "': part map size mismatch");
        }
        for (auto part : block.part_of_residual) {
            if (part >= part_names.size()) {
                throw ConfigurationError("block '" + block.name + "': part index out of range");
            }
        }
        if (block.scale.size() != block.points.size() * block.residual_count) {
            throw ConfigurationError("block '" + block.name + "': scale table size mismatch");
        }
    }
}

std::size_t worker_thread_count() {
    if (const char* env = std::getenv("PINNCONTACT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct WorkItem {
    std::size_t block;
    std::size_t begin;
    std::size_t count;
};

struct ItemResult {
    std::vector<double> parts;
    Eigen::VectorXd gradient;
};

struct Workspace {
    Tape tape;
    TangentCache cache;
    Eigen::MatrixXd adjoint;
    std::vector<Var> residuals;
    std::vector<double> seeds;
};

void run_item(const Architecture& arch, const ParameterVector& params, const Objective& objective,
              const WorkItem& item, bool with_gradient, Workspace& ws, ItemResult& result) {
    const ResidualBlock& block = objective.blocks[item.block];
    const std::span<const Vec3> points(block.points.data() + item.begin, item.count);
    forward_tangent(arch, params, points, ws.cache);

    const auto n = static_cast<Eigen::Index>(item.count);
    const std::size_t rc = block.residual_count;
    result.parts.assign(objective.part_names.size(), 0.0);
    if (with_gradient) {
        ws.adjoint.setZero(static_cast<Eigen::Index>(kOutputCount), 4 * n);
    }
    ws.residuals.resize(rc);
    ws.seeds.resize(rc);

    PointVars vars;
    for (std::size_t k = 0; k < item.count; ++k) {
        const auto p = static_cast<Eigen::Index>(k);
        ws.tape.clear();
        vars.x = points[k];
        vars.index = item.begin + k;
        for (std::size_t i = 0; i < kOutputCount; ++i) {
            const auto ci = static_cast<Eigen::Index>(i);
            vars.value[i] = ws.tape.variable(ws.cache.value(ci, p));
            for (std::size_t j = 0; j < kSpatialDim; ++j) {
                vars.d_dx[i][j] = ws.tape.variable(ws.cache.derivative(ci, p, static_cast<Eigen::Index>(j)));
            }
        }
        for (auto& r : ws.residuals) {
            r = Var();
        }
        block.residuals(ws.tape, vars, ws.residuals);

        const double* scale = block.scale.data() + (item.begin + k) * rc;
        for (std::size_t r = 0; r < rc; ++r) {
            const double v = ws.residuals[r].value;
            result.parts[block.part_of_residual[r]] += scale[r] * v * v;
            ws.seeds[r] = 2.0 * scale[r] * v;
        }
        if (!with_gradient) {
            continue;
        }
        ws.tape.backward(ws.residuals, ws.seeds);
        for (std::size_t i = 0; i < kOutputCount; ++i) {
            const auto ci = static_cast<Eigen::Index>(i);
            ws.adjoint(ci, p) = ws.tape.adjoint(vars.value[i]);
            for (std::size_t j = 0; j < kSpatialDim; ++j) {
                ws.adjoint(ci, static_cast<Eigen::Index>(j + 1) * n + p) = ws.tape.adjoint(vars.d_dx[i][j]);
            }
        }
    }
    if (with_gradient) {
        result.gradient.setZero(params.size());
        backward_tangent(arch, params, ws.cache, ws.adjoint, result.gradient);
    }
}

} // namespace

ObjectiveValue evaluate_objective(const Architecture& arch, const ParameterVector& params, const Objective& objective,
                                  const EvaluationOptions& options) {
    arch.check_parameters(params);
    objective.validate(arch.output_dim);
    const std::size_t batch = std::max<std::size_t>(1, options.batch_size);

    std::vector<WorkItem> items;
    for (std::size_t b = 0; b < objective.blocks.size(); ++b) {
        const std::size_t n = objective.blocks[b].points.size();
        for (std::size_t begin = 0; begin < n; begin += batch) {
            items.push_back({b, begin, std::min(batch, n - begin)});
        }
    }

    std::vector<ItemResult> results(items.size());
    const std::size_t threads =
        std::min(items.size(), options.threads == 0 ? worker_thread_count() : options.threads);
    if (threads <= 1) {
        Workspace ws;
        for (std::size_t i = 0; i < items.size(); ++i) {
            run_item(arch, params, objective, items[i], options.with_gradient, ws, results[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                Workspace ws;
                try {
                    for (std::size_t i = next++; i < items.size(); i = next++) {
                        run_item(arch, params, objective, items[i], options.with_gradient, ws, results[i]);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    ObjectiveValue out;
    out.parts.assign(objective.part_names.size(), 0.0);
    if (options.with_gradient) {
        out.gradient.setZero(params.size());
    }
    for (const auto& r : results) {
        for (std::size_t k = 0; k < out.parts.size(); ++k) {
            out.parts[k] += r.parts[k];
        }
        if (options.with_gradient) {
            out.gradient += r.gradient;
        }
    }
    for (double part : out.parts) {
        out.total += part;
    }
    return out;
}

ObjectiveValue loss_gradient(const ParameterVector& params, const ParameterFn& objective) {
    Tape tape;
    std::vector<Var> theta;
    theta.reserve(static_cast<std::size_t>(params.size()));
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        theta.push_back(tape.variable(params[i]));
    }
    const Var result = objective(tape, theta);
    ObjectiveValue out;
    out.total = result.value;
    out.parts = {result.value};
    out.gradient.setZero(params.size());
    if (result.is_constant()) {
        return out;
    }
    tape.backward(result);
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        out.gradient[i] = tape.adjoint(theta[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace pinncontact::autodiff
