#include <gtest/gtest.h>

#include "qwell/design.hpp"
#include "qwell/errors.hpp"
#include "support/fixtures.hpp"

using namespace qwell;

namespace {

std::vector<double> probabilities(const fixtures::System& sys, const SignPattern& p)
{
    return well_probabilities(evolve(localized_state(sys.basis, p), 0.0), sys.profile);
}

}  // namespace

TEST(SignPattern, Validation)
{
    EXPECT_NO_THROW((SignPattern{{1, -1, 1}, 2}.validate()));
    EXPECT_THROW((SignPattern{{-1, 1}, 0}.validate()), DomainError);
    EXPECT_THROW((SignPattern{{1, 2}, 0}.validate()), DomainError);
    EXPECT_THROW((SignPattern{{}, 0}.validate()), DomainError);
    EXPECT_EQ((SignPattern{{1, -1, 1}, 0}.str()), "+ - +");
    EXPECT_DOUBLE_EQ((SignPattern{{1, 1, 1, 1}, 0}.magnitude()), 0.5);
}

TEST(LocalizedState, TwoWell)
{
    const auto sys = fixtures::solve(fixtures::multiwell(2), 2, fixtures::kLightMass);
    const auto s = localized_state(sys.basis, {{1, 1}, 0});
    EXPECT_NEAR(s.coefficients[0].real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(s.coefficients[1].real(), std::sqrt(0.5), 1e-15);
    const auto p1 = probabilities(sys, {{1, 1}, 0});
    const auto p2 = probabilities(sys, {{1, -1}, 1});
    EXPECT_GT(p1[0], 0.9);
    EXPECT_GT(p2[1], 0.9);
    EXPECT_NEAR(p1[0], p2[1], 1e-9);
}

TEST(LocalizedState, ProjectRoundTrip)
{
    const auto sys = fixtures::solve(fixtures::multiwell(4), 4, fixtures::kLightMass);
    const auto s = localized_state(sys.basis, {{1, -1, -1, 1}, 2});
    const auto back = project(evolve(s, 0.0), sys.basis);
    for (std::size_t n = 0; n < 4; ++n)
        EXPECT_LT(std::abs(back.coefficients[n] - s.coefficients[n]), 1e-12);
}

TEST(LocalizedState, BasisTooSmall)
{
    const auto sys = fixtures::solve(fixtures::multiwell(4), 2, fixtures::kLightMass);
    EXPECT_THROW(localized_state(sys.basis, {{1, 1, 1, 1}, 0}), DomainError);
}

TEST(TablePattern, Rows)
{
    EXPECT_EQ(table_pattern(6, 0).signs, (std::vector<int>{1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(table_pattern(6, 1).signs, (std::vector<int>{1, 1, 1, -1, -1, -1}));
    EXPECT_EQ(table_pattern(6, 2).signs, (std::vector<int>{1, 1, -1, -1, 1, 1}));
    EXPECT_EQ(table_pattern(6, 3).signs, (std::vector<int>{1, -1, -1, 1, 1, -1}));
    EXPECT_EQ(table_pattern(6, 5).signs, (std::vector<int>{1, -1, 1, -1, 1, -1}));
    EXPECT_DOUBLE_EQ(table_pattern(6, 0).magnitude(), 1.0 / std::sqrt(6.0));
    EXPECT_THROW(table_pattern(4, 0), DomainError);
    EXPECT_THROW(table_pattern(6, 6), DomainError);
}

TEST(BestSignPattern, MatchesBruteForceOracle)
{
    for (int wells : {2, 3, 4})
    {
        const auto sys = fixtures::solve(fixtures::multiwell(wells), wells, fixtures::kLightMass);
        for (std::size_t target = 0; target < static_cast<std::size_t>(wells); ++target)
        {
            // Enumerate independently by bit mask.
            double best = -1.0;
            std::vector<int> best_signs;
            for (unsigned mask = 0; mask < (1u << (wells - 1)); ++mask)
            {
                std::vector<int> signs{1};
                for (int b = wells - 2; b >= 0; --b)
                    signs.push_back((mask >> b) & 1u ? -1 : 1);
                const double p = probabilities(sys, {signs, target})[target];
                if (p > best + 1e-12)
                {
                    best = p;
                    best_signs = signs;
                }
            }
            const auto found = best_sign_pattern(sys.basis, sys.profile, target);
            EXPECT_EQ(found.signs, best_signs) << wells << " wells, target " << target;
            const auto probs = probabilities(sys, found);
            for (std::size_t j = 0; j < probs.size(); ++j)
                if (j != target)
                    EXPECT_GT(probs[target], probs[j]);
        }
    }
}

TEST(BestSignPattern, PaperChoicesForFirstWell)
{
    const auto two = fixtures::solve(fixtures::multiwell(2), 2, fixtures::kLightMass);
    EXPECT_EQ(best_sign_pattern(two.basis, two.profile, 0).signs, (std::vector<int>{1, 1}));
    const auto four = fixtures::solve(fixtures::multiwell(4), 4, fixtures::kLightMass);
    EXPECT_EQ(best_sign_pattern(four.basis, four.profile, 0).signs, (std::vector<int>{1, 1, 1, 1}));
    EXPECT_EQ(evaluate_patterns(four.basis, four.profile, 0).size(), 8u);
}

TEST(SignPatterns, GlobalSignFlipInvariant)
{
    const auto sys = fixtures::solve(fixtures::multiwell(4), 4, fixtures::kLightMass);
    const auto a = evolve(localized_state(sys.basis, {{1, -1, 1, 1}, 0}), 0.0);
    auto flipped = localized_state(sys.basis, {{1, -1, 1, 1}, 0});
    for (auto& c : flipped.coefficients)
        c = -c;
    const auto b = evolve(flipped, 0.0);
    const auto pa = well_probabilities(a, sys.profile);
    const auto pb = well_probabilities(b, sys.profile);
    for (std::size_t j = 0; j < pa.size(); ++j)
        EXPECT_NEAR(pa[j], pb[j], 1e-12);
}

TEST(SignPatterns, MirrorPartnerNegatesOddStates)
{
    for (int wells : {2, 4, 6})
    {
        const auto sys = fixtures::solve(fixtures::multiwell(wells), wells, fixtures::kLightMass);
        const auto n = static_cast<std::size_t>(wells);
        for (std::size_t k = 0; k < n; ++k)
        {
            const auto pk = best_sign_pattern(sys.basis, sys.profile, k);
            auto mirrored = pk.signs;
            for (std::size_t i = 1; i < n; i += 2)
                mirrored[i] = -mirrored[i];
            const auto a = probabilities(sys, pk);
            const auto b = probabilities(sys, {mirrored, n - 1 - k});
            for (std::size_t j = 0; j < n; ++j)
                EXPECT_NEAR(a[j], b[n - 1 - j], 1e-6) << wells << " " << k;
        }
    }
}

TEST(ValidateTable, ReportsBothPatterns)
{
    const auto sys = fixtures::solve(fixtures::multiwell(6), 6, fixtures::kLightMass);
    const auto checks = validate_table(sys.basis, sys.profile);
    ASSERT_EQ(checks.size(), 6u);
    for (std::size_t w = 0; w < 6; ++w)
    {
        const auto& c = checks[w];
        EXPECT_EQ(c.table.pattern.signs, table_pattern(6, w).signs);
        EXPECT_GE(c.brute_force.probabilities[w], c.table.probabilities[w] - 1e-12);
        EXPECT_EQ(c.agrees, c.table.pattern.signs == c.brute_force.pattern.signs);
    }
}

TEST(TwoWellHopPeriod, MatchesSplitting)
{
    const auto sys = fixtures::solve(fixtures::multiwell(2), 2, fixtures::kLightMass);
    const double de = sys.basis->energies[1] - sys.basis->energies[0];
    EXPECT_DOUBLE_EQ(two_well_hop_period(*sys.basis), kPi * sys.basis->units.hbar / de);
    auto bad = *sys.basis;
    bad.energies[1] = bad.energies[0];
    EXPECT_THROW(two_well_hop_period(bad), InvalidBasisError);
}

TEST(InverseBarrierHeight, RoundTrip)
{
    DesignOptions opts;
    opts.units = fixtures::units(fixtures::kLightMass);
    opts.rel_tol = 1e-6;
    const auto geometry = fixtures::multiwell(2);
    const double target = hop_period_at(geometry, 0.5, opts);
    const auto d = inverse_barrier_height(geometry, target, 0.4, 0.65, opts);
    EXPECT_NEAR(d.barrier_height_eV, 0.5, 1e-3);
    EXPECT_NEAR(d.period_fs / target, 1.0, 1e-6);
}

TEST(InverseBarrierHeight, UnreachableTarget)
{
    DesignOptions opts;
    opts.units = fixtures::units(fixtures::kLightMass);
    const auto geometry = fixtures::multiwell(2);
    const double above = hop_period_at(geometry, 0.6, opts) * 1.01;
    EXPECT_THROW(inverse_barrier_height(geometry, above, 0.4, 0.6, opts), BracketError);
    EXPECT_THROW(inverse_barrier_height(geometry, above, 0.6, 0.4, opts), BracketError);
    EXPECT_THROW(inverse_barrier_height(fixtures::multiwell(4), above, 0.4, 0.6, opts), DomainError);
}
