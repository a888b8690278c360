#include "anodiff/limit_solver.hpp"
#include "anodiff/quadrature.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace anodiff;
using reference::pi;

namespace {

SpectralDensity random_real_spectrum(const SpatialGrid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> values(g.size());
    for (double& v : values) v = u(rng);
    FourierTransform ft(g);
    return ft.forward(values);
}

}  // namespace

TEST(Fourier, RoundTrip) {
    const SpatialGrid g(64);
    std::vector<double> values(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) values[i] = std::exp(std::sin(pi * g.node(i))) + g.node(i);
    FourierTransform ft(g);
    const auto back = ft.inverse(ft.forward(values));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(back[i], values[i], 1e-14);
}

TEST(Fourier, SineAmplitudes) {
    const SpatialGrid g(16);
    std::vector<double> values(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) values[i] = 1.0 + std::sin(pi * g.node(i));
    FourierTransform ft(g);
    const auto hat = ft.forward(values);
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double k = hat.wavenumber[i];
        cplx expected = 0.0;
        if (k == 0.0) expected = 1.0;
        if (std::abs(k - pi) < 1e-12) expected = cplx(0.0, -0.5);
        if (std::abs(k + pi) < 1e-12) expected = cplx(0.0, 0.5);
        EXPECT_NEAR(std::abs(hat.amplitude[i] - expected), 0.0, 1e-15) << k;
    }
}

TEST(Fourier, HermitianForRealData) {
    const SpatialGrid g(32);
    const auto hat = random_real_spectrum(g, 3);
    for (std::size_t i = 1; i < hat.size(); ++i) {
        const std::size_t j = hat.mirror(i);
        EXPECT_DOUBLE_EQ(hat.wavenumber[j], -hat.wavenumber[i]);
        EXPECT_NEAR(std::abs(hat.amplitude[j] - std::conj(hat.amplitude[i])), 0.0, 1e-15);
    }
}

TEST(LimitSolver, IdentityAtZero) {
    const SpatialGrid g(32);
    const auto hat = random_real_spectrum(g, 5);
    const auto out = evolve(hat, ModelCase::heavy_tail(2.5), 1.68, 0.0);
    for (std::size_t i = 0; i < hat.size(); ++i) EXPECT_EQ(out.amplitude[i], hat.amplitude[i]);
}

TEST(LimitSolver, ZeroModeUnchanged) {
    const SpatialGrid g(32);
    const auto hat = random_real_spectrum(g, 7);
    const std::size_t zero = g.size() / 2;
    ASSERT_EQ(hat.wavenumber[zero], 0.0);
    for (double t : {0.1, 1.0, 100.0}) {
        EXPECT_EQ(evolve(hat, ModelCase::degenerate(0.5), 1.62, t).amplitude[zero], hat.amplitude[zero]);
    }
}

TEST(LimitSolver, SineProfile) {
    const auto m = ModelCase::heavy_tail(2.5);
    const double kap = kappa(m, make_substituted_grid(m, 1.0, 800));
    const SpatialGrid g(64);
    std::vector<double> rho0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rho0[i] = 1.0 + std::sin(pi * g.node(i));
    FourierTransform ft(g);
    const auto rho = ft.inverse(evolve(ft.forward(rho0), m, kap, 0.1));
    const double decay = std::exp(-kap * std::pow(pi, 1.5) * 0.1);
    EXPECT_NEAR(decay, 0.392, 5e-4);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(rho[i], 1.0 + decay * std::sin(pi * g.node(i)), 1e-14);
}

TEST(LimitSolver, Semigroup) {
    const SpatialGrid g(64);
    const auto hat = random_real_spectrum(g, 9);
    for (const auto& m : {ModelCase::heavy_tail(2.5), ModelCase::degenerate(0.5)}) {
        const double kap = kappa(m, make_substituted_grid(m, 1.0, 800));
        const auto once = evolve(hat, m, kap, 0.07);
        const auto twice = evolve(evolve(hat, m, kap, 0.03), m, kap, 0.04);
        // relative to the largest amplitude: deep in the tail exp(a)exp(b) and
        // exp(a+b) differ by |a+b| ulps, which is conditioning, not the solver
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < hat.size(); ++i) {
            diff = std::max(diff, std::abs(once.amplitude[i] - twice.amplitude[i]));
            scale = std::max(scale, std::abs(once.amplitude[i]));
        }
        EXPECT_LE(diff, 1e-14 * scale);
    }
}

TEST(LimitSolver, Contraction) {
    const SpatialGrid g(64);
    const auto hat = random_real_spectrum(g, 11);
    for (double t : {1e-3, 0.1, 2.0}) {
        const auto out = evolve(hat, ModelCase::heavy_tail(1.7), 2.0, t);
        for (std::size_t i = 0; i < hat.size(); ++i) EXPECT_LE(std::abs(out.amplitude[i]), std::abs(hat.amplitude[i]));
    }
}

TEST(LimitSolver, InvalidArguments) {
    const SpatialGrid g(8);
    const auto hat = random_real_spectrum(g, 1);
    EXPECT_THROW(evolve(hat, ModelCase::heavy_tail(2.5), 1.0, -1e-3), ConfigError);
    EXPECT_THROW(evolve(hat, ModelCase::heavy_tail(2.5), -1.0, 1.0), ConfigError);
}
