// Command-line front end: run a benchmark, verify invariants, or write a
// default configuration file.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pinncontact/error.hpp"
#include "pinncontact/harness/benchmark.hpp"
#include "pinncontact/harness/config.hpp"
#include "pinncontact/harness/verify.hpp"

using namespace pinncontact;
using namespace pinncontact::harness;

namespace {

struct RunOptions {
    std::string benchmark;
    bool data_enhanced = false;
    std::optional<std::uint64_t> seed;
    std::string config_file;
    std::string output;
    std::vector<std::string> overrides;
    bool quiet = false;
};

RunConfig assemble(const RunOptions& opt) {
    const Benchmark b = benchmark_from_string(opt.benchmark);
    RunConfig config = RunConfig::defaults(b);
    if (!opt.config_file.empty()) {
        config.load(opt.config_file);
        if (config.benchmark != b) {
            throw ConfigurationError(fmt::format("config file is for '{}' but the command runs '{}'",
                                                 to_string(config.benchmark), opt.benchmark));
        }
    }
    for (const auto& kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigurationError("--set expects key=value, got '" + kv + "'");
        }
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opt.seed) {
        config.seed = *opt.seed;
    }
    if (opt.data_enhanced) {
        config.data_enhanced = true;
    }
    if (!opt.output.empty()) {
        config.output_dir = opt.output;
    }
    config.validate();
    return config;
}

int run(const RunOptions& opt) {
    const RunConfig config = assemble(opt);
    const auto start = std::chrono::steady_clock::now();
    const auto progress = [&](const optimize::LogEntry& e) {
        if (opt.quiet || e.step % config.log_interval != 0) {
            return;
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fmt::print(stderr, "[{:7.1f}s] {:5} {:6d}  loss {:.6e}  |g| {:.3e}\n", seconds, e.phase, e.step, e.total,
                   e.grad_norm);
    };
    const auto outcome = run_benchmark(config, progress);
    const auto& r = outcome.report;
    fmt::print("benchmark {}{} seed {}\n", to_string(r.benchmark), r.data_enhanced ? " (data-enhanced)" : "",
               r.seed);
    fmt::print("training: {} Adam steps, {} L-BFGS iterations ({}), final loss {:.6e}\n", r.adam_steps,
               r.lbfgs_iterations, r.lbfgs_reason, r.final_loss.total);
    for (const auto& [name, value] : r.rel_l2) {
        fmt::print("  rel L2 {:8} {:10.4f} %\n", name, value);
    }
    fmt::print("  max contact pressure {:.6g}\n", r.max_contact_pressure);
    fmt::print("  KKT: min gap {:.3e}, max pressure {:.3e}, max |g p| {:.3e}\n", r.kkt.min_gap, r.kkt.max_pressure,
               r.kkt.max_complementarity);
    fmt::print("artifacts in {}\n", config.output_dir.string());
    return 0;
}

int verify() {
    bool all = true;
    for (const auto& check : run_verification()) {
        fmt::print("{} {}: {}\n", check.passed ? "PASS" : "FAIL", check.name, check.detail);
        all = all && check.passed;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-variable PINN solver for frictionless contact benchmarks", "pinncontact"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    RunOptions opt;
    auto* run_cmd = app.add_subcommand("run", "Train and score a benchmark");
    run_cmd->add_option("benchmark", opt.benchmark, "patch or hertz")
        ->required()
        ->check(CLI::IsMember({"patch", "hertz"}));
    run_cmd->add_flag("--data-enhanced", opt.data_enhanced, "Add the 150 analytical data points (hertz only)");
    run_cmd->add_option("--seed", opt.seed, "Seed for initialisation and sampling");
    run_cmd->add_option("--config", opt.config_file, "Key-value configuration file")->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--output", opt.output, "Output directory");
    run_cmd->add_option("--set", opt.overrides, "Override a configuration key (key=value), repeatable");
    run_cmd->add_flag("-q,--quiet", opt.quiet, "No progress output");

    auto* verify_cmd = app.add_subcommand("verify", "Run the invariant and oracle checks");

    std::string export_benchmark = "patch";
    std::string export_path;
    auto* export_cmd = app.add_subcommand("export-config", "Write the default configuration");
    export_cmd->add_option("benchmark", export_benchmark, "patch or hertz")->check(CLI::IsMember({"patch", "hertz"}));
    export_cmd->add_option("-o,--output", export_path, "File to write (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            return run(opt);
        }
        if (*verify_cmd) {
            return verify();
        }
        if (*export_cmd) {
            const auto config = RunConfig::defaults(benchmark_from_string(export_benchmark));
            if (export_path.empty()) {
                std::cout << config.to_text();
            } else {
                config.save(export_path);
            }
            return 0;
        }
    } catch (const ConfigurationError& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
