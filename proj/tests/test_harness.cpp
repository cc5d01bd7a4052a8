#include <doctest.h>

#include <cmath>
#include <bit>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pinncontact/error.hpp"
#include "pinncontact/harness/benchmark.hpp"
#include "pinncontact/harness/config.hpp"
#include "pinncontact/harness/export.hpp"
#include "pinncontact/harness/metrics.hpp"
#include "pinncontact/oracles.hpp"

using namespace pinncontact;
using namespace pinncontact::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pinncontact_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

RunConfig tiny(Benchmark b) {
    RunConfig c = RunConfig::defaults(b);
    c.arch.hidden_layers = 2;
    c.arch.hidden_width = 6;
    c.patch_counts.interior = 30;
    c.patch_counts.contact = 9;
    c.patch_counts.evaluation_per_axis = 4;
    c.hertz_counts.interior = 30;
    c.hertz_counts.curved = 8;
    c.hertz_counts.contact = 6;
    c.hertz_counts.evaluation = 25;
    c.data_per_line = 5;
    c.adam.epochs = 5;
    c.lbfgs.max_iterations = 5;
    c.seed = 4;
    return c;
}

ParameterVector noisy(const Architecture& arch, std::uint64_t seed) {
    ParameterVector theta = init_glorot_uniform(arch, seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 0.3);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        theta[i] += 0.1 * n(rng);
    }
    return theta;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("relative l2 examples") {
    const std::vector<double> truth{1.0, -2.0, 3.0, 0.5};
    CHECK(relative_l2(truth, truth) == 0.0);
    std::vector<double> scaled;
    for (double t : truth) {
        scaled.push_back(1.01 * t);
    }
    CHECK(relative_l2(scaled, truth) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> zero(4, 0.0);
    CHECK(relative_l2(zero, truth) == 100.0);
    CHECK_THROWS_AS(relative_l2(truth, zero), DomainError);
    CHECK_THROWS_AS(relative_l2(std::vector<double>{1.0}, truth), ConfigurationError);
    CHECK_THROWS_AS(relative_l2(std::vector<double>{}, std::vector<double>{}), ConfigurationError);
}

TEST_CASE("polar stress") {
    SymStress s;
    s.c = {1.0, -3.0, 0.2, 0.7, 0.1, -0.4};
    const auto bottom = polar_stress({0.0, -0.9, -0.5}, s);
    CHECK(bottom.srr == s[1]);
    CHECK(bottom.stt == s[0]);
    const auto side = polar_stress({0.8, 0.0, -0.5}, s);
    CHECK(side.srr == doctest::Approx(s[0]).epsilon(1e-14));
    CHECK(side.stt == doctest::Approx(s[1]).epsilon(1e-14));
    // 45 degrees: e_r = (1, -1)/sqrt2
    const auto diag = polar_stress({0.5, -0.5, 0.0}, s);
    CHECK(diag.srr == doctest::Approx(0.5 * (s[0] + s[1]) - s[3]).epsilon(1e-14));
    CHECK(diag.srr + diag.stt == doctest::Approx(s[0] + s[1]).epsilon(1e-14));
}

TEST_CASE("config defaults") {
    const auto patch = RunConfig::defaults(Benchmark::patch);
    CHECK(patch.young == 1.33);
    CHECK(patch.poisson == 0.33);
    CHECK(patch.pressure == 0.1);
    CHECK(patch.weights.kkt == 1.0);
    CHECK(patch.adam.lr == 1e-3);
    CHECK(patch.adam.epochs == 2000);
    CHECK(patch.arch.hidden_layers == 5);
    CHECK(patch.arch.hidden_width == 50);
    const auto hertz = RunConfig::defaults(Benchmark::hertz);
    CHECK(hertz.young == 200.0);
    CHECK(hertz.poisson == 0.3);
    CHECK(hertz.pressure == 0.5);
    CHECK(hertz.weights.kkt == 500.0);
    CHECK(hertz.hertz.contact_angle_deg == 15.0);
    CHECK_FALSE(hertz.data_enhanced);
}

TEST_CASE("config text round trip and errors") {
    auto c = RunConfig::defaults(Benchmark::hertz);
    c.set("weights.coupling", "1, 2, 3, 4, 5, 6");
    c.set("weights.momentum", "0.5");
    c.set("lbfgs.gradient_norm_tol", "1e-9");
    c.set("output.vtk", "false");
    c.set("seed", "17");
    CHECK(c.weights.coupling == std::array<double, 6>{1, 2, 3, 4, 5, 6});
    CHECK(c.weights.momentum == std::array<double, 3>{0.5, 0.5, 0.5});
    CHECK(c.get("seed") == "17");

    auto d = RunConfig::defaults(Benchmark::patch);
    d.apply_text(c.to_text());
    CHECK(d.to_text() == c.to_text());
    CHECK(d.benchmark == Benchmark::hertz);
    CHECK(d.lbfgs.gradient_norm_tol == 1e-9);

    const auto path = scratch("config.txt");
    c.save(path);
    auto e = RunConfig::defaults(Benchmark::patch);
    e.load(path);
    CHECK(e.to_text() == c.to_text());

    CHECK_THROWS_AS(c.set("no.such.key", "1"), ConfigurationError);
    CHECK_THROWS_AS(c.set("adam.lr", "fast"), ConfigurationError);
    CHECK_THROWS_AS(c.set("weights.coupling", "1,2"), ConfigurationError);
    CHECK_THROWS_AS(c.set("output.vtk", "maybe"), ConfigurationError);
    CHECK_THROWS_AS(c.apply_text("adam.lr 0.1"), ConfigurationError);
    CHECK_NOTHROW(c.apply_text("# comment only\n\nadam.lr = 0.01   # trailing\n"));
    CHECK(c.adam.lr == 0.01);
    CHECK_THROWS_AS(c.load(scratch("missing.txt")), IoError);

    auto bad = RunConfig::defaults(Benchmark::patch);
    bad.data_enhanced = true;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = RunConfig::defaults(Benchmark::patch);
    bad.poisson = 0.5;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("problem assembly") {
    const auto patch = build_problem(RunConfig::defaults(Benchmark::patch));
    CHECK(patch.points.at(PointRole::interior).size() == 2000);
    CHECK(patch.points.at(PointRole::contact).size() == 400);
    CHECK(patch.points.count(PointRole::data) == 0);
    CHECK(patch.points.count(PointRole::evaluation) == 0);

    auto hc = RunConfig::defaults(Benchmark::hertz);
    const auto vanilla = build_problem(hc);
    CHECK_FALSE(vanilla.use_data);
    CHECK(vanilla.points.at(PointRole::data).size() == 150);
    CHECK(vanilla.weights.kkt == 500.0);
    hc.data_enhanced = true;
    CHECK(build_problem(hc).use_data);

    hc.hertz_refine_points = 300;
    const auto refined = build_problem(hc);
    const auto& interior = refined.points.at(PointRole::interior);
    REQUIRE(interior.size() == 5300);
    for (std::size_t i = 5000; i < interior.size(); ++i) {
        const auto& x = interior.points[i];
        CHECK(HertzDomain{}.contains(x));
        CHECK(x[0] <= 0.3);
        CHECK(x[1] <= -0.7);
    }

    CHECK(evaluation_set(RunConfig::defaults(Benchmark::patch)).size() == 9261);
    const auto line = evaluation_set(RunConfig::defaults(Benchmark::hertz));
    CHECK(line.size() == 200);
    CHECK(line.points.front() == Vec3{0.0, -1.0, -0.75});
    CHECK(line.points.back() == Vec3{0.0, -0.7642, -0.75});
}

TEST_CASE("plain-vanilla and data-enhanced differ only in the data term at initialisation") {
    auto c = RunConfig::defaults(Benchmark::hertz);
    c.hertz_counts.interior = 200;
    c.hertz_counts.curved = 50;
    c.hertz_counts.contact = 40;
    const auto theta = init_glorot_uniform(c.arch, c.seed);
    const auto vanilla = total_loss(theta, build_problem(c));
    c.data_enhanced = true;
    const auto enhanced = total_loss(theta, build_problem(c));
    CHECK(vanilla.data == 0.0);
    CHECK(enhanced.data > 0.0);
    for (std::size_t k = 0; k < kLossPartCount; ++k) {
        if (k != kData) {
            CHECK(vanilla.parts()[k] == enhanced.parts()[k]);
        }
    }
}

TEST_CASE("tau branch rule reproduces the oracle") {
    const auto c = oracles::hertz_constants(200.0, 0.3, 1.0, 1.0, 0.5);
    for (int k = 0; k <= 400; ++k) {
        const double d = k * 0.001;
        const auto s = oracles::hertz_stress_profile(d, c, 0.3);
        CHECK(oracles::tau_max_from_stresses(s.sxx, s.syy, s.szz, d, c.half_width) == s.tau_max);
    }
}

TEST_CASE("field csv: header and bitwise round trip") {
    const auto config = tiny(Benchmark::hertz);
    const auto theta = noisy(config.arch, 2);
    const auto eval = evaluation_set(config);
    const auto fields = predict(theta, config.arch, hertz_transform(), eval.points);
    const auto path = scratch("fields.csv");
    write_fields_csv(path, eval.points, fields, true);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,z,ux,uy,uz,sxx,syy,szz,sxy,syz,sxz,srr,stt");
    const auto table = read_csv(path);
    REQUIRE(table.rows.size() == eval.size());
    for (std::size_t p = 0; p < eval.size(); ++p) {
        const auto& row = table.rows[p];
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(row[j] == eval.points[p][j]);
            CHECK(row[3 + j] == fields[p].u[j]);
        }
        for (std::size_t k = 0; k < 6; ++k) {
            CHECK(row[6 + k] == fields[p].sigma[k]);
        }
        // x = 0: the radial direction is -y
        CHECK(row[table.column("srr")] == fields[p].sigma[1]);
    }

    const auto patch_path = scratch("patch_fields.csv");
    write_fields_csv(patch_path, eval.points, fields, false);
    std::ifstream pin(patch_path);
    std::getline(pin, header);
    CHECK(header == "x,y,z,ux,uy,uz,sxx,syy,szz,sxy,syz,sxz");
    CHECK_THROWS_AS(write_fields_csv("/nonexistent-dir/f.csv", eval.points, fields, false), IoError);
}

TEST_CASE("report errors can be recomputed from the exported csv") {
    for (Benchmark b : {Benchmark::patch, Benchmark::hertz}) {
        const auto config = tiny(b);
        const auto theta = noisy(config.arch, 3);
        const auto report = evaluate(config, theta);
        const auto eval = evaluation_set(config);
        const auto transform = build_problem(config).transform;
        const auto path = scratch("recompute.csv");
        write_fields_csv(path, eval.points, predict(theta, config.arch, transform, eval.points),
                         b == Benchmark::hertz);
        const auto table = read_csv(path);
        std::vector<std::vector<double>> pred(4);
        std::vector<std::vector<double>> truth(4);
        const auto hc = oracles::hertz_constants(config.young, config.poisson, 1.0, 1.0, config.pressure);
        for (const auto& row : table.rows) {
            const Vec3 x{row[0], row[1], row[2]};
            if (b == Benchmark::patch) {
                const auto exact = oracles::patch_solution(x, config.young, config.poisson, config.pressure);
                const double p[4] = {row[3], row[4], row[5], row[7]};
                const double t[4] = {exact.u[0], exact.u[1], exact.u[2], exact.sigma[1]};
                for (int k = 0; k < 4; ++k) {
                    pred[k].push_back(p[k]);
                    truth[k].push_back(t[k]);
                }
            } else {
                const double d = x[1] + 1.0;
                const auto exact = oracles::hertz_stress_profile(std::max(d, 0.0), hc, config.poisson);
                const double tau = d <= 0.436 * hc.half_width ? 0.5 * (row[8] - row[7]) : 0.5 * (row[6] - row[7]);
                const double p[4] = {row[6], row[7], row[8], tau};
                const double t[4] = {exact.sxx, exact.syy, exact.szz, exact.tau_max};
                for (int k = 0; k < 4; ++k) {
                    pred[k].push_back(p[k]);
                    truth[k].push_back(t[k]);
                }
            }
        }
        REQUIRE(report.rel_l2.size() == 4);
        for (std::size_t k = 0; k < 4; ++k) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < pred[k].size(); ++i) {
                num += std::pow(pred[k][i] - truth[k][i], 2);
                den += std::pow(truth[k][i], 2);
            }
            const double recomputed = 100.0 * std::sqrt(num / den);
            CHECK(report.rel_l2[k].second == doctest::Approx(recomputed).epsilon(1e-12));
        }
    }
}

TEST_CASE("vtk export") {
    const auto config = tiny(Benchmark::patch);
    const auto eval = evaluation_set(config);
    const auto fields = predict(noisy(config.arch, 1), config.arch, patch_transform(), eval.points);
    const auto path = scratch("fields.vtk");
    write_fields_vtk(path, eval.points, fields, false);
    const auto text = slurp(path);
    CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(text.find("POINTS 64 double") != std::string::npos);
    CHECK(text.find("CELL_TYPES 64") != std::string::npos);
    CHECK(text.find("VECTORS displacement double") != std::string::npos);
    CHECK(text.find("SCALARS sxz double 1") != std::string::npos);
    CHECK(text.find("srr") == std::string::npos);
}

TEST_CASE("checkpoint round trip") {
    Architecture arch;
    const auto theta = noisy(arch, 6);
    const auto path = scratch("theta.bin");
    write_checkpoint(path, theta, arch, 6, "patch");
    CHECK(std::filesystem::file_size(path) == 8 * arch.parameter_count());
    CHECK(read_checkpoint(path, arch) == theta);
    const auto side = nlohmann::json::parse(slurp(path.string() + ".json"));
    CHECK(side["parameter_count"] == arch.parameter_count());
    CHECK(side["byte_order"] == "little");
    CHECK(side["seed"] == 6);
    Architecture other = arch;
    other.hidden_width = 10;
    CHECK_THROWS_AS(read_checkpoint(path, other), IoError);
    // the first value is stored little-endian
    std::ifstream in(path, std::ios::binary);
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) {
        bits = (bits << 8) | bytes[i];
    }
    CHECK(std::bit_cast<double>(bits) == theta[0]);
}

TEST_CASE("report json schema") {
    BenchmarkReport r;
    r.benchmark = Benchmark::hertz;
    r.rel_l2 = {{"sxx", 1.5}, {"tau_max", 0.25}};
    r.lbfgs_reason = "gradient_tolerance";
    const auto doc = report_to_json(r);
    std::vector<std::string> keys;
    for (const auto& item : doc.items()) {
        keys.push_back(item.key());
    }
    CHECK(keys == std::vector<std::string>{"schema_version", "benchmark", "data_enhanced", "seed", "rel_l2_percent",
                                           "max_contact_pressure", "kkt", "final_loss", "training", "artifacts"});
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["rel_l2_percent"]["tau_max"] == 0.25);
    CHECK(doc["final_loss"].size() == kLossPartCount + 1);
    CHECK(r.error("sxx") == 1.5);
    CHECK_THROWS_AS(r.error("uy"), ConfigurationError);
}

TEST_CASE("run_benchmark: artifacts and determinism on a tiny configuration") {
    for (Benchmark b : {Benchmark::patch, Benchmark::hertz}) {
        auto config = tiny(b);
        config.data_enhanced = b == Benchmark::hertz;
        config.output_dir = scratch("run_" + to_string(b));
        std::filesystem::remove_all(config.output_dir);
        const auto first = run_benchmark(config);
        for (const char* f : {"config.txt", "training_log.csv", "fields.csv", "fields.vtk", "theta.bin",
                              "theta.bin.json", "report.json"}) {
            CHECK_MESSAGE(std::filesystem::exists(config.output_dir / f), f);
        }
        const auto doc = nlohmann::json::parse(slurp(config.output_dir / "report.json"));
        CHECK(doc["benchmark"] == to_string(b));
        CHECK(doc["training"]["adam_steps"] == 5);
        CHECK(read_checkpoint(config.output_dir / "theta.bin", config.arch) == first.training.theta);

        auto reread = RunConfig::defaults(Benchmark::patch);
        reread.load(config.output_dir / "config.txt");
        CHECK(reread.to_text() == config.to_text());

        const auto second = run_benchmark(config, {}, false);
        REQUIRE(second.report.rel_l2.size() == first.report.rel_l2.size());
        for (std::size_t k = 0; k < first.report.rel_l2.size(); ++k) {
            CHECK(second.report.rel_l2[k].second == first.report.rel_l2[k].second);
        }
    }
}

} // TEST_SUITE
