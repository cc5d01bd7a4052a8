#include <doctest.h>

#include <random>

#include "pinncontact/elasticity.hpp"
#include "pinncontact/error.hpp"

using namespace pinncontact;

namespace {

Mat3 random_matrix(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat3 m;
    for (auto& row : m) {
        for (auto& v : row) {
            v = u(rng);
        }
    }
    return m;
}

SymStrain random_strain(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymStrain e;
    for (auto& c : e.c) {
        c = u(rng);
    }
    return e;
}

} // namespace

TEST_SUITE("elasticity") {

TEST_CASE("material: Lame parameters and validation") {
    const MaterialParams m(1.33, 0.33);
    CHECK(m.lame_lambda() == doctest::Approx(1.33 * 0.33 / (1.33 * 0.34)));
    CHECK(m.lame_mu() == doctest::Approx(1.33 / 2.66));
    CHECK_THROWS_AS(MaterialParams(0.0, 0.3), ConfigurationError);
    CHECK_THROWS_AS(MaterialParams(1.0, 0.5), ConfigurationError);
    CHECK_THROWS_AS(MaterialParams(1.0, -1.0), ConfigurationError);
}

TEST_CASE("strain from displacement gradient") {
    Mat3 zero{};
    for (double c : strain_from_displacement_gradient(zero).c) {
        CHECK(c == 0.0);
    }
    Mat3 id{};
    id[0][0] = id[1][1] = id[2][2] = 1.0;
    const auto e = strain_from_displacement_gradient(id);
    CHECK(e.c == std::array<double, 6>{1, 1, 1, 0, 0, 0});
    Mat3 shear{};
    shear[0][1] = 2.0;
    const auto s = strain_from_displacement_gradient(shear);
    CHECK(s.c == std::array<double, 6>{0, 0, 0, 1, 0, 0});
}

TEST_CASE("hooke stress") {
    const MaterialParams m(200.0, 0.3);
    SymStrain zero;
    for (double c : hooke_stress(zero, m).c) {
        CHECK(c == 0.0);
    }
    SymStrain hydro;
    hydro.c = {1, 1, 1, 0, 0, 0};
    const auto s = hooke_stress(hydro, m);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s[i] == doctest::Approx(3.0 * m.lame_lambda() + 2.0 * m.lame_mu()));
        CHECK(s[i + 3] == 0.0);
    }
}

TEST_CASE("hooke stress: uniaxial patch-test strain gives sigma_yy = -p") {
    const double E = 1.33;
    const double nu = 0.33;
    const double p = 0.1;
    // independent evaluation of λ, μ
    const double lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
    const double mu = E / (2 * (1 + nu));
    SymStrain eps;
    eps.c = {nu * p / E, -p / E, nu * p / E, 0, 0, 0};
    const double tr = eps.trace();
    const auto s = hooke_stress(eps, MaterialParams(E, nu));
    CHECK(s[0] == doctest::Approx(lambda * tr + 2 * mu * eps[0]));
    CHECK(std::abs(s[0]) < 1e-15);
    CHECK(s[1] == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(std::abs(s[2]) < 1e-15);
    CHECK(s[3] == 0.0);
}

TEST_CASE("property: trace identity and linearity of Hooke's law") {
    std::mt19937_64 rng(1);
    const MaterialParams m(1.33, 0.33);
    const double bulk3 = 3.0 * m.lame_lambda() + 2.0 * m.lame_mu();
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const auto e1 = random_strain(rng);
        const auto e2 = random_strain(rng);
        CHECK(hooke_stress(e1, m).trace() == doctest::Approx(bulk3 * e1.trace()).epsilon(1e-12));
        const double a = u(rng);
        const double b = u(rng);
        SymStrain mix;
        for (std::size_t i = 0; i < 6; ++i) {
            mix[i] = a * e1[i] + b * e2[i];
        }
        const auto lhs = hooke_stress(mix, m);
        const auto s1 = hooke_stress(e1, m);
        const auto s2 = hooke_stress(e2, m);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(lhs[i] == doctest::Approx(a * s1[i] + b * s2[i]).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("momentum residual") {
    const Vec3 zero{0, 0, 0};
    CHECK(momentum_residual<double>({0, 0, 0}, zero) == Vec3{0, 0, 0});
    CHECK(momentum_residual<double>({1, 2, 3}, {-1, -2, -3}) == Vec3{0, 0, 0});
    // constant stress: zero divergence leaves the body force
    std::array<std::array<double, 3>, 6> jac{};
    CHECK(momentum_residual<double>(divergence_of_stress<double>(jac), {0.5, 0, -1}) == Vec3{0.5, 0, -1});
}

TEST_CASE("property: divergence of Hooke stress matches the Navier operator") {
    // u_i = ½ B_ijk x_j x_k with B symmetric in (j, k): ∂_j ∇u is the constant
    // matrix G_j[i][k] = B_ikj, so div σ = μ ∇²u + (λ + μ) ∇(∇·u) exactly,
    // with ∇²u_i = Σ_j B_ijj and ∂_i(∇·u) = Σ_j B_jji.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const MaterialParams m(200.0, 0.3);
    const double lambda = m.lame_lambda();
    const double mu = m.lame_mu();
    for (int k = 0; k < 50; ++k) {
        double B[3][3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                for (int l = j; l < 3; ++l) {
                    B[i][j][l] = B[i][l][j] = u(rng);
                }
            }
        }
        std::array<std::array<double, 3>, 6> jac{};
        for (std::size_t j = 0; j < 3; ++j) {
            Mat3 g{};
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t l = 0; l < 3; ++l) {
                    g[i][l] = B[i][l][j];
                }
            }
            const auto s = hooke_stress(strain_from_displacement_gradient(g), m);
            for (std::size_t c = 0; c < 6; ++c) {
                jac[c][j] = s[c];
            }
        }
        const auto div = divergence_of_stress<double>(jac);
        for (std::size_t i = 0; i < 3; ++i) {
            double lap = 0.0;
            double grad_div = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                lap += B[i][j][j];
                grad_div += B[j][j][i];
            }
            CHECK(div[i] == doctest::Approx(mu * lap + (lambda + mu) * grad_div).epsilon(1e-12));
        }
        // a linear field has constant stress and is in equilibrium without body force
        std::array<std::array<double, 3>, 6> none{};
        CHECK(momentum_residual<double>(divergence_of_stress<double>(none), {0, 0, 0}) == Vec3{0, 0, 0});
    }
}

TEST_CASE("stress coupling residual") {
    const MaterialParams m(1.33, 0.33);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const Mat3 g = random_matrix(rng);
        const auto consistent = hooke_stress(strain_from_displacement_gradient(g), m);
        for (double r : stress_coupling_residual(consistent, g, m)) {
            CHECK(r == 0.0);
        }
    }
    Mat3 zero{};
    SymStress s;
    s.c = {1, 0, 0, 0, 0, 0};
    CHECK(stress_coupling_residual(s, zero, m) == std::array<double, 6>{1, 0, 0, 0, 0, 0});
}

TEST_CASE("divergence of stress") {
    std::array<std::array<double, 3>, 6> zero{};
    CHECK(divergence_of_stress<double>(zero) == Vec3{0, 0, 0});
    std::array<std::array<double, 3>, 6> sxx{};
    sxx[0][0] = 1.0;
    CHECK(divergence_of_stress<double>(sxx) == Vec3{1, 0, 0});

    // σ_voigt = A x: expand the full tensor and sum ∂σ_ij/∂x_j by hand.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<std::array<double, 3>, 6> a{};
    for (auto& row : a) {
        for (auto& v : row) {
            v = u(rng);
        }
    }
    const int full[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
    Vec3 expected{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            expected[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(full[i][j])][static_cast<std::size_t>(j)];
        }
    }
    const auto div = divergence_of_stress<double>(a);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(div[i] == doctest::Approx(expected[i]).epsilon(1e-15));
    }
}

} // TEST_SUITE
