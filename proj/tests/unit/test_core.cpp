#include <gtest/gtest.h>

#include <random>

#include "qwell/analytic.hpp"
#include "qwell/core.hpp"
#include "qwell/errors.hpp"

using namespace qwell;

namespace {

Wavefunction random_state(const Grid& g, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    std::vector<complex> a(g.points());
    for (auto& z : a)
        z = {d(rng), d(rng)};
    return Wavefunction(g, std::move(a));
}

}  // namespace

TEST(Grid, InteriorNodesExcludeWalls)
{
    Grid g(100.0, 1999);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.05);
    EXPECT_DOUBLE_EQ(g.x(0), 0.05);
    EXPECT_NEAR(g.x(g.points() - 1), 100.0 - 0.05, 1e-12);
}

TEST(Grid, RejectsBadArguments)
{
    EXPECT_THROW(Grid(0.0, 100), DomainError);
    EXPECT_THROW(Grid(-1.0, 100), DomainError);
    EXPECT_THROW(Grid(100.0, 2), DomainError);
}

TEST(Units, DerivedQuantities)
{
    UnitSystem u;
    EXPECT_DOUBLE_EQ(u.kinetic_scale(), 0.0380998);
    u.effective_mass_ratio = 0.067;
    EXPECT_NEAR(u.kinetic_scale(), 0.0380998 / 0.067, 1e-15);
    // hbar^2 / (2 m) recovered from the mass.
    EXPECT_NEAR(u.hbar * u.hbar / (2.0 * u.mass()), u.kinetic_scale(), 1e-15);
    u.effective_mass_ratio = 0.0;
    EXPECT_THROW(u.validate(), DomainError);
}

TEST(InnerProduct, NormalizedStateHasUnitNorm)
{
    Grid g(100.0, 2000);
    std::mt19937_64 rng(1);
    const auto psi = normalize(random_state(g, rng));
    const auto s = inner_product(psi, psi);
    EXPECT_NEAR(s.real(), 1.0, 1e-12);
    EXPECT_NEAR(s.imag(), 0.0, 1e-12);
}

TEST(InnerProduct, DistinctSinesAreOrthogonal)
{
    Grid g(100.0, 2000);
    const auto p1 = infinite_well_state(1, g);
    const auto p2 = infinite_well_state(2, g);
    EXPECT_LT(std::abs(inner_product(p1, p2)), 1e-8);
    // Linearity: <phi1 | (phi1 + phi2)/sqrt2> = 1/sqrt2.
    const auto sum = combine(1.0 / std::sqrt(2.0), p1, 1.0 / std::sqrt(2.0), p2);
    EXPECT_NEAR(inner_product(p1, sum).real(), std::sqrt(0.5), 1e-8);
}

TEST(InnerProduct, AnalyticStatesOrthonormal)
{
    Grid g(100.0, 2000);
    for (int m = 1; m <= 10; ++m)
    {
        for (int n = 1; n <= 10; ++n)
        {
            const auto s = inner_product(infinite_well_state(m, g), infinite_well_state(n, g));
            EXPECT_NEAR(std::abs(s), m == n ? 1.0 : 0.0, 1e-6) << m << "," << n;
        }
    }
}

TEST(InnerProduct, Sesquilinear)
{
    Grid g(10.0, 257);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> d;
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto a = random_state(g, rng);
        const auto b = random_state(g, rng);
        const auto c = random_state(g, rng);
        const complex alpha{d(rng), d(rng)};
        const complex beta{d(rng), d(rng)};
        const auto lhs = inner_product(a, combine(alpha, b, beta, c));
        const auto rhs = alpha * inner_product(a, b) + beta * inner_product(a, c);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs)));
        // Conjugate symmetry.
        EXPECT_LT(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST(InnerProduct, GridMismatch)
{
    const auto a = Wavefunction::zeros(Grid(100.0, 100));
    EXPECT_THROW(inner_product(a, Wavefunction::zeros(Grid(100.0, 101))), GridMismatchError);
    EXPECT_THROW(inner_product(a, Wavefunction::zeros(Grid(50.0, 100))), GridMismatchError);
    EXPECT_THROW(combine(1.0, a, 1.0, Wavefunction::zeros(Grid(50.0, 100))), GridMismatchError);
}

TEST(Normalize, IdempotentAndScaleInvariant)
{
    Grid g(100.0, 500);
    std::mt19937_64 rng(3);
    const auto psi = random_state(g, rng);
    const auto once = normalize(psi);
    const auto twice = normalize(once);
    auto scaled = psi;
    for (auto& z : scaled.amplitudes())
        z *= 3.0;
    const auto from_scaled = normalize(scaled);
    for (std::size_t i = 0; i < g.points(); ++i)
    {
        EXPECT_LT(std::abs(once[i] - twice[i]), 1e-12);
        EXPECT_LT(std::abs(once[i] - from_scaled[i]), 1e-12);
    }
}

TEST(Normalize, ZeroStateRejected)
{
    EXPECT_THROW(normalize(Wavefunction::zeros(Grid(1.0, 10))), DegenerateStateError);
}

TEST(Wavefunction, SizeMustMatchGrid)
{
    EXPECT_THROW(Wavefunction(Grid(1.0, 10), std::vector<complex>(9)), GridMismatchError);
}
