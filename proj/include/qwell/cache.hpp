#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "qwell/spectral.hpp"

namespace qwell {

inline constexpr std::uint32_t kCacheVersion = 1;

/// On-disk store of eigen-solutions, one binary file per fingerprint.
///
/// File layout (little endian): magic "QWEC", u32 version, u64 fingerprint,
/// u64 points, f64 length_nm, u64 k, u64 seed, then k f64 residuals, k u32
/// iteration counts, k f64 energies and k * points f64 eigenvector entries.
/// Records are re-verified against the Hamiltonian on load.
class EigenCache
{
  public:
    explicit EigenCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(std::uint64_t fingerprint) const;

    /// Loaded and verified record, or empty when missing or invalid.
    std::optional<EigenSolution> load(const TridiagonalHamiltonian& h, std::size_t k,
                                      const SolverOptions& options = {}) const;

    /// Atomic write (temporary file then rename).
    void store(const EigenSolution& solution, std::uint64_t seed) const;

    /// load() or solve-and-store.
    EigenSolution solve(const TridiagonalHamiltonian& h, std::size_t k, const SolverOptions& options = {}) const;

  private:
    std::filesystem::path dir_;
};

}  // namespace qwell
