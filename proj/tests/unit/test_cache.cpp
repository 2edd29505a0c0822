#include <gtest/gtest.h>

#include <fstream>

#include "qwell/cache.hpp"
#include "qwell/dynamics.hpp"
#include "qwell/design.hpp"
#include "support/fixtures.hpp"

using namespace qwell;

namespace {

class CacheTest : public ::testing::Test
{
  protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path() /
               ("qwell_cache_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::filesystem::path dir_;
};

TridiagonalHamiltonian two_well(double barrier = 0.5)
{
    const auto p = build_multiwell(fixtures::multiwell(2, barrier));
    const Grid g(100.0, 2000);
    return assemble(sample(p, g), g, fixtures::units(fixtures::kLightMass));
}

}  // namespace

TEST_F(CacheTest, RoundTripIsBitExact)
{
    const auto h = two_well();
    const EigenCache cache(dir_);
    EXPECT_FALSE(cache.load(h, 2).has_value());
    const auto fresh = cache.solve(h, 2);
    EXPECT_TRUE(std::filesystem::exists(cache.path_for(eigen_fingerprint(h, 2))));
    const auto loaded = cache.load(h, 2);
    ASSERT_TRUE(loaded.has_value());
    EXPECT_EQ(loaded->energies, fresh.energies);
    EXPECT_EQ(loaded->states, fresh.states);
    EXPECT_EQ(loaded->residuals, fresh.residuals);
    EXPECT_EQ(loaded->iterations, fresh.iterations);

    // Traces from the cached basis equal the uncached ones.
    const auto a = std::make_shared<const EigenSolution>(fresh);
    const auto b = std::make_shared<const EigenSolution>(*loaded);
    const auto ta = autocorrelation(localized_state(a, {{1, 1}, 0}), TauAxis{});
    const auto tb = autocorrelation(localized_state(b, {{1, 1}, 0}), TauAxis{});
    for (std::size_t j = 0; j < ta.values.size(); ++j)
        ASSERT_NEAR(ta.values[j], tb.values[j], 1e-12);
}

TEST_F(CacheTest, CorruptRecordIsRejectedAndReplaced)
{
    const auto h = two_well();
    const EigenCache cache(dir_);
    const auto fresh = cache.solve(h, 2);
    const auto path = cache.path_for(eigen_fingerprint(h, 2));
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-800, std::ios::end);
        const double junk = 0.25;
        f.write(reinterpret_cast<const char*>(&junk), sizeof junk);
    }
    EXPECT_FALSE(cache.load(h, 2).has_value());
    const auto again = cache.solve(h, 2);
    EXPECT_EQ(again.energies, fresh.energies);
    EXPECT_TRUE(cache.load(h, 2).has_value());
}

TEST_F(CacheTest, TruncatedAndForeignRecordsRejected)
{
    const auto h = two_well();
    const EigenCache cache(dir_);
    cache.solve(h, 2);
    const auto path = cache.path_for(eigen_fingerprint(h, 2));
    std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
    EXPECT_FALSE(cache.load(h, 2).has_value());

    // A valid record for another Hamiltonian copied into this slot.
    const auto other = two_well(0.6);
    cache.solve(other, 2);
    std::filesystem::copy_file(cache.path_for(eigen_fingerprint(other, 2)), path,
                               std::filesystem::copy_options::overwrite_existing);
    EXPECT_FALSE(cache.load(h, 2).has_value());
}

TEST_F(CacheTest, DistinctKeys)
{
    const auto h = two_well();
    EXPECT_NE(eigen_fingerprint(h, 2), eigen_fingerprint(two_well(0.6), 2));
    EXPECT_NE(EigenCache(dir_).path_for(eigen_fingerprint(h, 2)), EigenCache(dir_).path_for(eigen_fingerprint(h, 3)));
}
