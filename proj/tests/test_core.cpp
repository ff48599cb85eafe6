#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "m2hs/core.hpp"
#include "support/families.hpp"

using namespace m2hs;
namespace ts = m2hs::testsupport;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> constant(int n, double v) { return std::vector<double>(n, v); }
}  // namespace

TEST_CASE("energy: constants and a single mode") {
    const Grid g(256);
    CHECK(energy(constant(g.n, 0.0), constant(g.n, 0.0), g) == 0.0);
    // (1/4) int 4 dx = 1
    CHECK(energy(constant(g.n, 0.0), constant(g.n, 2.0), g) == doctest::Approx(1.0).epsilon(1e-14));

    // u0x = 2 sqrt(2) sin(2 pi x): (1/4) * 8 * (1/2) = 1, and the periodic
    // trapezoid is exact for a single mode
    std::vector<double> ux(g.n);
    for (int j = 0; j < g.n; ++j) ux[j] = 2.0 * std::sqrt(2.0) * std::sin(2.0 * kPi * g.x(j));
    CHECK(std::abs(energy(ux, constant(g.n, 0.0), g) - 1.0) < 1e-10);
}

TEST_CASE("energy: grid mismatch is a contract violation") {
    const Grid g(64);
    CHECK_THROWS_AS(energy(constant(32, 1.0), constant(64, 1.0), g), ContractViolation);
}

TEST_CASE("contact_angle: constants and oscillation") {
    const Grid g(128);
    CHECK(contact_angle(constant(g.n, 0.0), g) == 0.0);
    CHECK(contact_angle(constant(g.n, 2.0), g) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<double> rho(g.n);
    for (int j = 0; j < g.n; ++j) rho[j] = 2.0 + std::cos(2.0 * kPi * g.x(j));
    CHECK(std::abs(contact_angle(rho, g) - 1.0) < 1e-12);
}

TEST_CASE("thetas: closed-form cases") {
    {
        const auto [t1, t2] = thetas(0.0, 1.0, 0.3);
        CHECK(t1 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t2 == doctest::Approx(-1.0).epsilon(1e-15));
    }
    {
        const auto [t1, t2] = thetas(2.0, 1.0, 0.0);
        CHECK(t1 == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
        CHECK(t2 == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-15));
    }
    {
        // sum 1, product -0.5; cross-check as roots of x^2 - s x - (c2 - s delta)
        const auto [t1, t2] = thetas(1.0, 1.0, 0.5);
        CHECK(t1 + t2 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t1 * t2 == doctest::Approx(-0.5).epsilon(1e-14));
        for (double r : {t1, t2}) CHECK(std::abs(r * r - 1.0 * r - 0.5) < 1e-14);
        CHECK(t1 > t2);
    }
}

TEST_CASE("thetas: identity properties over random parameters") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
        const double s = 4.0 * ts::uniform01(rng) - 2.0;
        const double c2 = 0.2 + 1.5 * ts::uniform01(rng);
        const double delta = ts::uniform01(rng) - 0.5;
        const double disc = s * s + 4.0 * (c2 - s * delta);
        if (disc <= 1e-8) continue;
        const auto [t1, t2] = thetas(s, c2, delta);
        const double scale = std::max({1.0, std::abs(s), std::abs(c2 - s * delta)});
        CHECK(std::abs(t1 + t2 - s) <= 4e-15 * scale);
        CHECK(std::abs(t1 * t2 + (c2 - s * delta)) <= 8e-15 * scale);
    }
}

TEST_CASE("thetas: degenerate discriminant throws") {
    // unit-speed data can only degenerate at s = 2, delta = 1 (rho == 2)
    CHECK_THROWS_AS(thetas(2.0, 1.0, 1.0), DegenerateFrequencies);
    CHECK_THROWS_AS(thetas(2.0, 1.0, 1.1), DegenerateFrequencies);
}

TEST_CASE("normalize: scale and idempotence") {
    const Grid g(64);
    InitialData d;
    d.grid = g;
    d.u0 = constant(g.n, 0.0);
    d.u0x = constant(g.n, 0.0);
    d.rho0 = constant(g.n, 4.0);  // energy 4
    const auto [nd, scale] = normalize(d);
    CHECK(scale == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nd.rho0[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(energy(nd.u0x, nd.rho0, g) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(contact_angle(nd.rho0, g) == doctest::Approx(1.0).epsilon(1e-13));

    const auto [nd2, scale2] = normalize(nd);
    CHECK(scale2 == doctest::Approx(1.0).epsilon(1e-13));
    for (int j = 0; j < g.n; ++j) CHECK(std::abs(nd2.rho0[j] - nd.rho0[j]) < 1e-12);
}

TEST_CASE("normalize: zero energy throws") {
    const Grid g(32);
    InitialData d;
    d.grid = g;
    d.u0 = d.u0x = d.rho0 = constant(g.n, 0.0);
    CHECK_THROWS_AS(normalize(d), ZeroEnergy);
}

TEST_CASE("fourier_synthesize: basis construction") {
    const Grid g(128);
    {
        const InitialData d = fourier_synthesize({}, {}, 0.0, g);
        for (int j = 0; j < g.n; ++j) {
            CHECK(d.u0[j] == 0.0);
            CHECK(d.u0x[j] == 0.0);
            CHECK(d.rho0[j] == 0.0);
        }
    }
    {
        const std::vector<Mode> um = {{1, 1.0, 0.0}};
        const InitialData d = fourier_synthesize(um, {}, 0.0, g);
        for (int j = 0; j < g.n; ++j) {
            CHECK(d.u0[j] == doctest::Approx(std::sin(2.0 * kPi * g.x(j))).epsilon(1e-14));
            CHECK(d.u0x[j] ==
                  doctest::Approx(2.0 * kPi * std::cos(2.0 * kPi * g.x(j))).epsilon(1e-14));
        }
    }
    {
        // gauge u0(0) = 0 holds exactly for any mode mix
        std::mt19937_64 rng(3);
        std::vector<Mode> um;
        for (int k = 1; k <= 5; ++k) um.push_back({k, ts::uniform01(rng), ts::uniform01(rng)});
        const InitialData d = fourier_synthesize(um, {}, 0.0, g);
        CHECK(d.u0[0] == 0.0);
        // the derivative has zero grid mean by construction
        CHECK(std::abs(trapz_periodic(d.u0x, g)) < 1e-12);
    }
    const std::vector<Mode> aliased = {{64, 1.0, 0.0}};
    CHECK_THROWS_AS(fourier_synthesize(aliased, {}, 0.0, g), AliasedMode);
    CHECK_THROWS_AS(fourier_synthesize({}, aliased, 0.0, g), AliasedMode);
}

TEST_CASE("cumulative_integral: constants and oscillation") {
    const Grid g(512);
    {
        const auto F = cumulative_integral(constant(g.n, 1.0), g);
        CHECK(F[0] == 0.0);
        for (int j = 0; j <= g.n; ++j) CHECK(F[j] == doctest::Approx(j * g.h).epsilon(1e-13));
        CHECK(F[g.n] == doctest::Approx(1.0).epsilon(1e-14));
    }
    {
        const auto F = cumulative_integral(constant(g.n, 0.0), g);
        for (double v : F) CHECK(v == 0.0);
    }
    {
        // antiderivative of cos(2 pi x) is sin(2 pi x)/(2 pi), which vanishes at 1
        std::vector<double> f(g.n);
        for (int j = 0; j < g.n; ++j) f[j] = std::cos(2.0 * kPi * g.x(j));
        const auto F = cumulative_integral(f, g);
        CHECK(std::abs(F[g.n]) < 1e-12);
    }
}

TEST_CASE("cumulative_integral endpoint equals trapz_periodic exactly") {
    const InitialData d = ts::random_family(256, 9);
    std::vector<double> f(d.grid.n);
    for (int j = 0; j < d.grid.n; ++j) f[j] = d.u0x[j] * d.rho0[j] + 0.25;
    CHECK(cumulative_integral(f, d.grid).back() == trapz_periodic(f, d.grid));
}

TEST_CASE("energy and contact_angle are stable under grid refinement") {
    std::mt19937_64 rng(17);
    std::vector<Mode> um, rm;
    for (int k = 1; k <= 4; ++k) {
        um.push_back({k, ts::uniform01(rng) / k, ts::uniform01(rng) / k});
        rm.push_back({k, 0.4 * ts::uniform01(rng) / k, 0.4 * ts::uniform01(rng) / k});
    }
    const InitialData d1 = fourier_synthesize(um, rm, 0.7, Grid(256));
    const InitialData d2 = fourier_synthesize(um, rm, 0.7, Grid(512));
    CHECK(std::abs(energy(d1.u0x, d1.rho0, d1.grid) - energy(d2.u0x, d2.rho0, d2.grid)) < 1e-12);
    CHECK(std::abs(contact_angle(d1.rho0, d1.grid) - contact_angle(d2.rho0, d2.grid)) < 1e-12);
}

TEST_CASE("seed_blowup_site: exact site with unit energy") {
    for (double s : {0.0, 0.5, 1.0, 2.0}) {
        const auto fam = ts::seeded_family(256, 21, s);
        CHECK(fam.data.rho0[fam.site] == s);
        CHECK(std::abs(energy(fam.data.u0x, fam.data.rho0, fam.data.grid) - 1.0) < 1e-12);
    }
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(15), ContractViolation);
    CHECK_THROWS_AS(Grid(8), ContractViolation);
    CHECK(Grid(16).h == doctest::Approx(1.0 / 16));
}

TEST_CASE("make_params ties frequencies to measured invariants") {
    const InitialData d = ts::random_family(128, 5);
    const SimParams p = make_params(0.8, d);
    CHECK(p.c2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.theta1 > p.theta2);
    CHECK(p.theta1 + p.theta2 == doctest::Approx(p.s).epsilon(1e-14));
    CHECK(p.theta1 * p.theta2 == doctest::Approx(-p.coupling()).epsilon(1e-13));
}
