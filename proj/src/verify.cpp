#include "pinncontact/harness/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "pinncontact/autodiff/tape.hpp"
#include "pinncontact/contact.hpp"
#include "pinncontact/elasticity.hpp"
#include "pinncontact/harness/benchmark.hpp"
#include "pinncontact/network.hpp"
#include "pinncontact/oracles.hpp"

namespace pinncontact::harness {

namespace {

CheckResult fb_zero_set() {
    constexpr double tol = 1e-12;
    int mismatches = 0;
    int sign_errors = 0;
    for (int i = 0; i <= 80; ++i) {
        for (int j = 0; j <= 80; ++j) {
            const double a = (i - 40) / 20.0;
            const double b = (j - 40) / 20.0;
            const double phi = fischer_burmeister(a, b);
            const bool zero_set = a >= -tol && b >= -tol && std::abs(a * b) < tol;
            mismatches += (std::abs(phi) < tol) != zero_set;
            if (!zero_set) {
                sign_errors += (a > 0.0 && b > 0.0) ? !(phi > 0.0) : !(phi < 0.0);
            }
        }
    }
    return {"fischer-burmeister zero set and sign", mismatches == 0 && sign_errors == 0,
            fmt::format("{} zero-set mismatches, {} sign errors on 81x81 grid", mismatches, sign_errors)};
}

CheckResult fb_origin_gradient() {
    autodiff::Tape tape;
    const auto a = tape.variable(0.0);
    const auto b = tape.variable(0.0);
    const auto f = fischer_burmeister<autodiff::Var>(a, b);
    tape.backward(f * f);
    const double taped = std::hypot(tape.adjoint(a), tape.adjoint(b));
    const double h = 1e-8;
    const auto phi2 = [](double x, double y) { return std::pow(fischer_burmeister(x, y), 2); };
    const double fd = std::hypot((phi2(h, 0) - phi2(-h, 0)) / (2 * h), (phi2(0, h) - phi2(0, -h)) / (2 * h));
    return {"squared residual gradient at the origin", std::isfinite(taped) && taped < 1e-6 && fd < 1e-6,
            fmt::format("taped {:.3g}, finite difference {:.3g}", taped, fd)};
}

CheckResult hooke_identities() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const MaterialParams m(200.0, 0.3);
    const double lambda = m.lame_lambda();
    const double mu = m.lame_mu();
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        SymStrain e1;
        SymStrain e2;
        for (std::size_t i = 0; i < 6; ++i) {
            e1[i] = u(rng);
            e2[i] = u(rng);
        }
        const double alpha = u(rng);
        SymStrain mix;
        for (std::size_t i = 0; i < 6; ++i) {
            mix[i] = alpha * e1[i] + e2[i];
        }
        const auto s1 = hooke_stress(e1, m);
        const auto s2 = hooke_stress(e2, m);
        const auto sm = hooke_stress(mix, m);
        worst = std::max(worst, std::abs(s1.trace() - (3 * lambda + 2 * mu) * e1.trace()) / (1 + std::abs(s1.trace())));
        for (std::size_t i = 0; i < 6; ++i) {
            worst = std::max(worst, std::abs(sm[i] - (alpha * s1[i] + s2[i])) / (1 + std::abs(sm[i])));
        }
    }
    return {"Hooke trace identity and linearity", worst < 1e-12, fmt::format("max relative defect {:.3g}", worst)};
}

CheckResult linear_equilibrium() {
    // A linear displacement field has constant strain, constant stress and
    // hence zero divergence; the transformed network of a linear map shows it.
    Architecture arch;
    arch.hidden_layers = 0;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        ParameterVector theta(static_cast<Eigen::Index>(arch.parameter_count()));
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            theta[i] = u(rng);
        }
        const auto layer = arch.layers().back();
        // stress outputs carry no x-dependence
        for (std::size_t c = 3; c < 9; ++c) {
            for (std::size_t j = 0; j < 3; ++j) {
                theta[static_cast<Eigen::Index>(layer.weight_offset + j * layer.fan_out + c)] = 0.0;
            }
        }
        const auto f = transformed_field_with_jacobian(theta, arch, OutputTransform{}, {u(rng), u(rng), u(rng)});
        std::array<std::array<double, 3>, 6> jac{};
        for (std::size_t c = 0; c < 6; ++c) {
            for (std::size_t j = 0; j < 3; ++j) {
                jac[c][j] = f.jacobian(static_cast<Eigen::Index>(3 + c), static_cast<Eigen::Index>(j));
            }
        }
        for (double r : momentum_residual<double>(divergence_of_stress<double>(jac), {0, 0, 0})) {
            worst = std::max(worst, std::abs(r));
        }
    }
    return {"momentum residual of linear fields", worst == 0.0, fmt::format("max |residual| {:.3g}", worst)};
}

CheckResult hard_constraints() {
    Architecture arch;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto patch = patch_transform();
    const auto hertz = hertz_transform();
    const auto theta = init_glorot_uniform(arch, 3);
    double worst = 0.0;
    const auto at = [&](const OutputTransform& t, const Vec3& x) {
        return transformed_field_with_jacobian(theta, arch, t, x).values;
    };
    const auto zero = [&](double v) { worst = std::max(worst, std::abs(v)); };
    for (int k = 0; k < 1000; ++k) {
        const double a = u(rng);
        const double b = u(rng);
        if (k % 2 == 0) {
            const auto x0 = at(patch, {0.0, a, b});
            zero(x0[kUx]);
            zero(x0[kSxy]);
            zero(x0[kSxz]);
            const auto x1 = at(patch, {1.0, a, b});
            zero(x1[kSxx]);
            zero(x1[kSxy]);
            zero(x1[kSxz]);
            const auto y1 = at(patch, {a, 1.0, b});
            zero(y1[kSyy] + 0.1);
            zero(y1[kSxy]);
            zero(y1[kSyz]);
            const auto z0 = at(patch, {a, b, 0.0});
            zero(z0[kUz]);
            zero(z0[kSyz]);
            zero(z0[kSxz]);
            const auto z1 = at(patch, {a, b, 1.0});
            zero(z1[kSzz]);
            zero(z1[kSyz]);
            zero(z1[kSxz]);
        } else {
            const double phi = 0.5 * std::numbers::pi * a;
            const auto sym = at(hertz, {0.0, -a, -b});
            zero(sym[kUx]);
            zero(sym[kSxy]);
            const auto top = at(hertz, {a, 0.0, -b});
            zero(top[kSyy] + 0.5);
            zero(top[kSxy]);
            zero(top[kSyz]);
            for (double z : {0.0, -1.0}) {
                const auto face = at(hertz, {b * std::sin(phi), -b * std::cos(phi), z});
                zero(face[kUz]);
                zero(face[kSyz]);
                zero(face[kSxz]);
            }
        }
    }
    return {"output transforms at 1000 random boundary points", worst <= 1e-15,
            fmt::format("max boundary defect {:.3g}", worst)};
}

CheckResult glorot_bounds() {
    Architecture arch;
    const auto theta = init_glorot_uniform(arch, 4);
    bool ok = true;
    for (const auto& layer : arch.layers()) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.fan_in + layer.fan_out));
        for (std::size_t k = 0; k < layer.fan_in * layer.fan_out; ++k) {
            ok = ok && std::abs(theta[static_cast<Eigen::Index>(layer.weight_offset + k)]) < limit;
        }
        for (std::size_t k = 0; k < layer.fan_out; ++k) {
            ok = ok && theta[static_cast<Eigen::Index>(layer.bias_offset + k)] == 0.0;
        }
    }
    return {"Glorot bounds per layer", ok, "weights inside (-L, L), zero biases"};
}

CheckResult gradient_oracle(Benchmark b) {
    RunConfig config = RunConfig::defaults(b);
    config.data_enhanced = b == Benchmark::hertz;
    config.patch_counts.interior = 5;
    config.patch_counts.contact = 5;
    config.hertz_counts.interior = 5;
    config.hertz_counts.curved = 5;
    config.hertz_counts.contact = 5;
    config.data_per_line = 2;
    const auto problem = build_problem(config);
    const auto objective = build_objective(problem);
    auto theta = init_glorot_uniform(problem.arch, 11);
    std::mt19937_64 rng(12);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const auto& layer : problem.arch.layers()) {
        for (std::size_t k = 0; k < layer.fan_out; ++k) {
            theta[static_cast<Eigen::Index>(layer.bias_offset + k)] = 0.3 * normal(rng);
        }
    }
    const auto grad = evaluate_loss(objective, problem.arch, theta, true).gradient;
    const auto f = [&](const Eigen::VectorXd& t) { return evaluate_loss(objective, problem.arch, t, false).breakdown.total; };
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd v(theta.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = normal(rng);
        }
        v /= v.norm();
        const double h = 1e-4;
        const double fd = (f(theta + h * v) - f(theta - h * v)) / (2 * h);
        worst = std::max(worst, std::abs(grad.dot(v) - fd) / std::max(std::abs(fd), 1e-8));
    }
    return {fmt::format("loss gradient vs finite differences ({})", to_string(b)), worst < 1e-5,
            fmt::format("max relative error {:.3g} over 20 directions", worst)};
}

CheckResult hertz_constants_check() {
    const auto c = oracles::hertz_constants(200.0, 0.3, 1.0, 1.0, 0.5);
    const auto round3 = [](double v) {
        const double scale = std::pow(10.0, 2 - std::floor(std::log10(std::abs(v))));
        return std::round(v * scale) / scale;
    };
    const bool ok = c.force == 1.0 && std::abs(round3(c.half_width) - 0.0761) < 1e-12 &&
                    std::abs(round3(c.max_pressure) - 8.36) < 1e-12;
    return {"Hertz constants", ok, fmt::format("F = {}, b = {:.6f}, p_max = {:.4f}", c.force, c.half_width, c.max_pressure)};
}

} // namespace

std::vector<CheckResult> run_verification() {
    return {fb_zero_set(),     fb_origin_gradient(), hooke_identities(),
            linear_equilibrium(), hard_constraints(), glorot_bounds(),
            gradient_oracle(Benchmark::patch), gradient_oracle(Benchmark::hertz), hertz_constants_check()};
}

} // namespace pinncontact::harness
