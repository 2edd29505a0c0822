#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "qwell/dynamics.hpp"
#include "qwell/potential.hpp"
#include "qwell/spectral.hpp"

namespace qwell {

/// Real +-1/sqrt(N) superposition of the lowest N eigenstates.
struct SignPattern
{
    std::vector<int> signs;
    std::size_t target_well = 0;

    double magnitude() const;
    /// signs[0] must be +1 and every entry +-1.
    void validate() const;
    /// "+ + - -" style rendering.
    std::string str() const;
};

SpectralState localized_state(std::shared_ptr<const EigenSolution> basis, const SignPattern& pattern);

/// Six-well sign table; target_well is 0-based. Other well counts throw
/// DomainError.
SignPattern table_pattern(int well_count, std::size_t target_well);

struct PatternScore
{
    SignPattern pattern;
    std::vector<double> probabilities;  // per well
};

/// Every gauge-fixed pattern (signs[0] = +1) in lexicographic order with +1
/// before -1, scored by well probability at t = 0.
std::vector<PatternScore> evaluate_patterns(std::shared_ptr<const EigenSolution> basis,
                                            const PotentialProfile& profile, std::size_t target_well);

/// Pattern maximizing the target-well probability; the first pattern in
/// evaluation order wins ties.
SignPattern best_sign_pattern(std::shared_ptr<const EigenSolution> basis, const PotentialProfile& profile,
                              std::size_t target_well);

struct TableCheck
{
    PatternScore table;
    PatternScore brute_force;
    /// Table row puts more probability in its claimed well than any other.
    bool table_localizes = false;
    /// Table row and brute-force optimum are the same pattern.
    bool agrees = false;
};

/// Compares every six-well table row with the brute-force optimum.
std::vector<TableCheck> validate_table(std::shared_ptr<const EigenSolution> basis, const PotentialProfile& profile);

/// pi hbar / (E_2 - E_1) [fs]: time of the first complete transfer between
/// the wells of a two-state doublet.
double two_well_hop_period(const EigenSolution& basis);

struct DesignOptions
{
    std::size_t grid_points = 2000;
    UnitSystem units;
    SolverOptions solver;
    double rel_tol = 1e-3;
    int max_iterations = 100;
};

/// Two-state hop period for a two-well geometry at a given barrier height.
double hop_period_at(const MultiWellSpec& geometry, double barrier_height_eV, const DesignOptions& options);

struct BarrierDesign
{
    double barrier_height_eV;
    double period_fs;
    int iterations;
};

/// Bisection on barrier height for a target two-well hop period.
///
/// Throws BracketError if the target is outside [period(lo), period(hi)] and
/// NonMonotonicError if period(lo) < period(mid) < period(hi) fails.
BarrierDesign inverse_barrier_height(const MultiWellSpec& geometry, double target_period_fs, double lo_eV,
                                     double hi_eV, const DesignOptions& options = {});

}  // namespace qwell
