#include "pinncontact/harness/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinncontact/error.hpp"
#include "pinncontact/harness/export.hpp"
#include "pinncontact/harness/metrics.hpp"
#include "pinncontact/oracles.hpp"

namespace pinncontact::harness {

namespace {

PatchDomain patch_domain(const RunConfig& c) {
    PatchDomain d = c.patch;
    d.p = c.pressure;
    return d;
}

HertzDomain hertz_domain(const RunConfig& c) {
    HertzDomain d = c.hertz;
    d.p = c.pressure;
    return d;
}

oracles::HertzConstants hertz_reference(const RunConfig& c) {
    const auto d = hertz_domain(c);
    return oracles::hertz_constants(c.young, c.poisson, d.radius, d.width, d.p);
}

/// Extra interior points below the contact line, same quasi-random sequence
/// family as the bulk sampling.
void refine_contact_zone(const RunConfig& c, PointSet& interior) {
    const auto d = hertz_domain(c);
    ShiftedHalton halton(c.seed ^ 0x9e3779b97f4a7c15ULL);
    std::size_t added = 0;
    while (added < c.hertz_refine_points) {
        const Vec3 u = halton.next();
        const Vec3 x{c.hertz_refine_width * u[0], -d.radius + c.hertz_refine_depth * u[1], -d.width * u[2]};
        if (u[0] == 0.0 || u[1] == 0.0 || u[2] == 0.0 || !d.contains(x, 0.0) ||
            x[0] * x[0] + x[1] * x[1] >= d.radius * d.radius) {
            continue;
        }
        interior.points.push_back(x);
        ++added;
    }
}

} // namespace

double BenchmarkReport::error(const std::string& field) const {
    for (const auto& [name, value] : rel_l2) {
        if (name == field) {
            return value;
        }
    }
    throw ConfigurationError("report has no error for '" + field + "'");
}

ContactProblem build_problem(const RunConfig& config) {
    config.validate();
    ContactProblem problem;
    problem.arch = config.arch;
    problem.material = MaterialParams(config.young, config.poisson);
    problem.weights = config.weights;
    if (config.benchmark == Benchmark::patch) {
        const auto d = patch_domain(config);
        problem.transform = patch_transform(d.l, d.h, d.w, d.p);
        problem.plane = RigidPlane::horizontal(0.0);
        problem.points = sample_patch(d, config.patch_counts, config.seed);
        problem.use_data = false;
    } else {
        const auto d = hertz_domain(config);
        problem.transform = hertz_transform(config.young, d.p, d.width);
        problem.plane = RigidPlane::horizontal(-d.radius);
        problem.points = sample_hertz(d, config.hertz_counts, config.seed);
        refine_contact_zone(config, problem.points.at(PointRole::interior));
        problem.points[PointRole::data] = hertz_data_lines(d, hertz_reference(config), config.poisson,
                                                           config.data_per_line, config.hertz_counts.evaluation_y_end);
        problem.use_data = config.data_enhanced;
    }
    problem.points.erase(PointRole::evaluation);
    return problem;
}

PointSet evaluation_set(const RunConfig& config) {
    if (config.benchmark == Benchmark::patch) {
        PatchCounts counts = config.patch_counts;
        counts.interior = 1;
        counts.contact = 1;
        return sample_patch(patch_domain(config), counts, config.seed).at(PointRole::evaluation);
    }
    PointSet eval;
    eval.role = PointRole::evaluation;
    const auto d = hertz_domain(config);
    for (double y : linspace(-d.radius, config.hertz_counts.evaluation_y_end, config.hertz_counts.evaluation)) {
        eval.points.push_back({0.0, y, config.hertz_counts.evaluation_z});
    }
    return eval;
}

std::vector<MixedField> predict(const ParameterVector& theta, const Architecture& arch,
                                const OutputTransform& transform, std::span<const Vec3> points) {
    std::vector<MixedField> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        const auto raw = forward(theta, arch, x);
        std::array<double, kOutputCount> v{};
        for (std::size_t i = 0; i < kOutputCount; ++i) {
            v[i] = transform.multiplier(i, x) * raw[static_cast<Eigen::Index>(i)] + transform.offset(i, x);
        }
        MixedField f;
        f.u = {v[0], v[1], v[2]};
        for (std::size_t i = 0; i < 6; ++i) {
            f.sigma[i] = v[3 + i];
        }
        out.push_back(f);
    }
    return out;
}

std::vector<std::pair<std::string, double>> field_errors(const RunConfig& config, std::span<const Vec3> points,
                                                         std::span<const MixedField> fields) {
    if (points.size() != fields.size()) {
        throw ConfigurationError("field_errors: point and field counts differ");
    }
    const std::size_t n = points.size();
    std::vector<std::pair<std::string, double>> out;
    if (config.benchmark == Benchmark::patch) {
        std::array<std::vector<double>, 4> pred;
        std::array<std::vector<double>, 4> truth;
        for (std::size_t p = 0; p < n; ++p) {
            const auto exact = oracles::patch_solution(points[p], config.young, config.poisson, config.pressure);
            const std::array<double, 4> a{fields[p].u[0], fields[p].u[1], fields[p].u[2], fields[p].sigma[1]};
            const std::array<double, 4> b{exact.u[0], exact.u[1], exact.u[2], exact.sigma[1]};
            for (std::size_t k = 0; k < 4; ++k) {
                pred[k].push_back(a[k]);
                truth[k].push_back(b[k]);
            }
        }
        const char* names[] = {"ux", "uy", "uz", "syy"};
        for (std::size_t k = 0; k < 4; ++k) {
            out.emplace_back(names[k], relative_l2(pred[k], truth[k]));
        }
        return out;
    }
    const auto constants = hertz_reference(config);
    const double radius = hertz_domain(config).radius;
    std::array<std::vector<double>, 4> pred;
    std::array<std::vector<double>, 4> truth;
    for (std::size_t p = 0; p < n; ++p) {
        const auto exact = oracles::hertz_field_at(points[p], constants, config.poisson, radius);
        const auto& s = fields[p].sigma;
        const double depth = std::max(points[p][1] + radius, 0.0);
        const double tau = oracles::tau_max_from_stresses(s[0], s[1], s[2], depth, constants.half_width);
        const std::array<double, 4> a{s[0], s[1], s[2], tau};
        const std::array<double, 4> b{exact.sxx, exact.syy, exact.szz, exact.tau_max};
        for (std::size_t k = 0; k < 4; ++k) {
            pred[k].push_back(a[k]);
            truth[k].push_back(b[k]);
        }
    }
    const char* names[] = {"sxx", "syy", "szz", "tau_max"};
    for (std::size_t k = 0; k < 4; ++k) {
        out.emplace_back(names[k], relative_l2(pred[k], truth[k]));
    }
    return out;
}

KktStats kkt_stats(const ContactProblem& problem, const ParameterVector& theta, double* max_pressure) {
    KktStats stats;
    stats.min_gap = std::numeric_limits<double>::infinity();
    stats.max_pressure = -std::numeric_limits<double>::infinity();
    double peak = 0.0;
    const auto it = problem.points.find(PointRole::contact);
    if (it == problem.points.end() || it->second.empty()) {
        throw ConfigurationError("kkt_stats: the problem has no contact points");
    }
    const auto& pts = it->second.points;
    const auto fields = predict(theta, problem.arch, problem.transform, pts);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const double g = gap<double>(pts[p], fields[p].u, problem.plane);
        const double pn = traction_decomposition<double>(fields[p].sigma, problem.plane).pressure;
        stats.min_gap = std::min(stats.min_gap, g);
        stats.max_pressure = std::max(stats.max_pressure, pn);
        stats.max_complementarity = std::max(stats.max_complementarity, std::abs(g * pn));
        peak = std::max(peak, std::abs(pn));
    }
    if (max_pressure != nullptr) {
        *max_pressure = peak;
    }
    return stats;
}

BenchmarkReport evaluate(const RunConfig& config, const ParameterVector& theta) {
    const auto problem = build_problem(config);
    config.arch.check_parameters(theta);
    BenchmarkReport report;
    report.benchmark = config.benchmark;
    report.data_enhanced = config.data_enhanced;
    report.seed = config.seed;
    const auto eval = evaluation_set(config);
    const auto fields = predict(theta, config.arch, problem.transform, eval.points);
    report.rel_l2 = field_errors(config, eval.points, fields);
    report.kkt = kkt_stats(problem, theta, &report.max_contact_pressure);
    report.final_loss = total_loss(theta, problem);
    return report;
}

RunOutcome run_benchmark(const RunConfig& config, const std::function<void(const optimize::LogEntry&)>& on_log,
                         bool write_artifacts) {
    const auto problem = build_problem(config);
    const auto& dir = config.output_dir;
    if (write_artifacts) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
        }
        config.save(dir / "config.txt");
    }

    // Keep a copy of the log so an aborted run can still be written out.
    optimize::TrainingLog partial;
    partial.part_names.assign(loss_part_names().begin(), loss_part_names().end());
    const auto observer = [&](const optimize::LogEntry& e) {
        partial.entries.push_back(e);
        if (on_log) {
            on_log(e);
        }
    };
    RunOutcome outcome;
    try {
        outcome.training = optimize::train(problem, config.seed, config.adam, config.lbfgs, observer);
    } catch (const TrainingAborted&) {
        if (write_artifacts) {
            partial.write_csv(dir / "training_log.csv", config.log_interval);
        }
        throw;
    }
    const auto& trained = outcome.training;

    auto& report = outcome.report;
    report = evaluate(config, trained.theta);
    report.final_loss = trained.final_loss;
    report.lbfgs_reason = config.lbfgs.max_iterations == 0 ? "skipped" : optimize::to_string(trained.lbfgs_reason);
    report.adam_steps = trained.adam_steps;
    report.lbfgs_iterations = trained.lbfgs_iterations;

    if (write_artifacts) {
        const auto eval = evaluation_set(config);
        const auto fields = predict(trained.theta, config.arch, problem.transform, eval.points);
        const bool polar = config.benchmark == Benchmark::hertz;
        trained.log.write_csv(dir / "training_log.csv", config.log_interval);
        report.artifacts["config"] = "config.txt";
        report.artifacts["training_log"] = "training_log.csv";
        write_fields_csv(dir / "fields.csv", eval.points, fields, polar);
        report.artifacts["fields_csv"] = "fields.csv";
        if (config.write_vtk) {
            write_fields_vtk(dir / "fields.vtk", eval.points, fields, polar);
            report.artifacts["fields_vtk"] = "fields.vtk";
        }
        if (config.write_checkpoint) {
            write_checkpoint(dir / "theta.bin", trained.theta, config.arch, config.seed, to_string(config.benchmark));
            report.artifacts["checkpoint"] = "theta.bin";
        }
        report.artifacts["report"] = "report.json";
        write_json(dir / "report.json", report_to_json(report));
    }
    return outcome;
}

} // namespace pinncontact::harness
