#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qwell/core.hpp"

namespace qwell {

/// Finite-difference (nearest-neighbour tight-binding) Hamiltonian on a grid.
///
/// Diagonal entries are 2t + V_i and every off-diagonal entry is -t, with
/// t = hbar^2 / (2 m h^2). Truncating the matrix at the first and last
/// interior node encodes the hard walls.
struct TridiagonalHamiltonian
{
    Grid grid;
    UnitSystem units;
    std::vector<double> diagonal;
    double hopping;  // t > 0

    double off_diagonal() const { return -hopping; }

    /// Infinity norm bound |d|_max + 2t.
    double norm_bound() const;

    /// y = H x.
    void apply(std::span<const double> x, std::span<double> y) const;

    /// Number of eigenvalues strictly below `shift` (Sturm sequence count).
    std::size_t count_below(double shift) const;

    /// Content hash of grid, units and matrix entries.
    std::uint64_t fingerprint() const;
};

TridiagonalHamiltonian assemble(std::span<const double> potential_eV, const Grid& grid,
                                const UnitSystem& units);

inline constexpr std::uint64_t kDefaultSeed = 0x5157454c4cULL;

struct SolverOptions
{
    /// Bisection stops once the bracket is narrower than this times |lambda|.
    double bisection_rel_tol = 1e-12;
    /// Inverse iteration target: residual < residual_rel_tol * E_K.
    double residual_rel_tol = 1e-10;
    /// Hard acceptance bound on the final residual, relative to E_K.
    double acceptance_rel_tol = 1e-8;
    int max_inverse_iterations = 50;
    /// Relative gap below which neighbouring eigenvalues form a cluster.
    double cluster_rel_gap = 1e-10;
    /// Seed for inverse-iteration starting vectors.
    std::uint64_t seed = kDefaultSeed;
    /// Split mirror-symmetric Hamiltonians into parity blocks.
    bool exploit_parity = true;
};

/// Lowest eigenpairs of a TridiagonalHamiltonian.
struct EigenSolution
{
    Grid grid;
    UnitSystem units;
    /// Ascending energies [eV].
    std::vector<double> energies;
    /// Real eigenvectors normalized under the discrete inner product; sign
    /// fixed so the first component above 1e-12 in magnitude is positive.
    std::vector<std::vector<double>> states;
    std::vector<double> residuals;
    std::vector<int> iterations;
    std::uint64_t hamiltonian_fingerprint = 0;

    std::size_t size() const { return energies.size(); }
    Wavefunction state(std::size_t n) const;
};

/// Sturm bisection for the k lowest eigenvalues, then inverse iteration with
/// Gram-Schmidt re-orthogonalization for the vectors.
///
/// Throws DomainError if k is outside [1, points] and ConvergenceError if a
/// residual stays above the acceptance bound.
EigenSolution lowest_eigenpairs(const TridiagonalHamiltonian& h, std::size_t k,
                                const SolverOptions& options = {});

/// Key of the k lowest eigenpairs of `h`; stored as
/// EigenSolution::hamiltonian_fingerprint.
std::uint64_t eigen_fingerprint(const TridiagonalHamiltonian& h, std::size_t k);

/// Worst of ||H v_i - E_i v_i|| over the solution, in the discrete norm.
double max_residual(const TridiagonalHamiltonian& h, const EigenSolution& solution);

/// Largest |<v_i|v_j> - delta_ij| over the solution.
double orthonormality_defect(const EigenSolution& solution);

/// Throws ConvergenceError if residuals or orthonormality fail the
/// acceptance bounds for `h`.
void verify_solution(const TridiagonalHamiltonian& h, const EigenSolution& solution,
                     const SolverOptions& options = {});

}  // namespace qwell
