#include "qwell/design.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "qwell/errors.hpp"

namespace qwell {

namespace {

// Rows are target wells, columns the coefficients of the lowest six states.
constexpr std::array<std::array<int, 6>, 6> kSixWellTable{{
    {1, 1, 1, 1, 1, 1},
    {1, 1, 1, -1, -1, -1},
    {1, 1, -1, -1, 1, 1},
    {1, -1, -1, 1, 1, -1},
    {1, -1, 1, 1, -1, 1},
    {1, -1, 1, -1, 1, -1},
}};

PatternScore score(const std::shared_ptr<const EigenSolution>& basis, const PotentialProfile& profile,
                   SignPattern pattern)
{
    const auto psi = evolve(localized_state(basis, pattern), 0.0);
    return {std::move(pattern), well_probabilities(psi, profile)};
}

bool localizes(const PatternScore& s, std::size_t well)
{
    for (std::size_t j = 0; j < s.probabilities.size(); ++j)
    {
        if (j != well && !(s.probabilities[well] > s.probabilities[j]))
            return false;
    }
    return true;
}

}  // namespace

double SignPattern::magnitude() const
{
    return 1.0 / std::sqrt(static_cast<double>(signs.size()));
}

void SignPattern::validate() const
{
    if (signs.empty())
        throw DomainError("sign pattern is empty");
    if (signs.front() != 1)
        throw DomainError("sign pattern must start with +1");
    for (int s : signs)
    {
        if (s != 1 && s != -1)
            throw DomainError("sign pattern entries must be +1 or -1");
    }
    if (target_well >= signs.size())
        throw DomainError("sign pattern target well out of range");
}

std::string SignPattern::str() const
{
    std::string out;
    for (std::size_t i = 0; i < signs.size(); ++i)
    {
        if (i > 0)
            out += ' ';
        out += signs[i] > 0 ? '+' : '-';
    }
    return out;
}

SpectralState localized_state(std::shared_ptr<const EigenSolution> basis, const SignPattern& pattern)
{
    pattern.validate();
    if (!basis)
        throw InvalidBasisError("localized_state needs a basis");
    const std::size_t n = pattern.signs.size();
    if (basis->size() < n)
    {
        std::ostringstream msg;
        msg << "basis has " << basis->size() << " states but the pattern needs " << n;
        throw DomainError(msg.str());
    }
    std::vector<complex> c(basis->size(), complex{0.0, 0.0});
    const double mag = pattern.magnitude();
    for (std::size_t i = 0; i < n; ++i)
        c[i] = pattern.signs[i] * mag;
    return SpectralState(std::move(basis), std::move(c));
}

SignPattern table_pattern(int well_count, std::size_t target_well)
{
    if (well_count != 6)
        throw DomainError("the sign table covers the six-well profile only");
    if (target_well >= 6)
        throw DomainError("six-well target index must be in [0, 5]");
    const auto& row = kSixWellTable[target_well];
    return {std::vector<int>(row.begin(), row.end()), target_well};
}

std::vector<PatternScore> evaluate_patterns(std::shared_ptr<const EigenSolution> basis,
                                            const PotentialProfile& profile, std::size_t target_well)
{
    const std::size_t n = profile.well_regions.size();
    if (target_well >= n)
        throw DomainError("target well out of range");
    if (!basis || basis->size() < n)
        throw DomainError("basis must hold at least one state per well");
    std::vector<PatternScore> out;
    const std::size_t combos = std::size_t{1} << (n - 1);
    for (std::size_t mask = 0; mask < combos; ++mask)
    {
        // Bit (n-2-i) of mask set means sign i+1 is negative, so mask order
        // is lexicographic with + before -.
        SignPattern p{std::vector<int>(n, 1), target_well};
        for (std::size_t i = 0; i + 1 < n; ++i)
        {
            if (mask & (std::size_t{1} << (n - 2 - i)))
                p.signs[i + 1] = -1;
        }
        out.push_back(score(basis, profile, std::move(p)));
    }
    return out;
}

SignPattern best_sign_pattern(std::shared_ptr<const EigenSolution> basis, const PotentialProfile& profile,
                              std::size_t target_well)
{
    const auto scores = evaluate_patterns(std::move(basis), profile, target_well);
    const PatternScore* best = &scores.front();
    for (const auto& s : scores)
    {
        if (s.probabilities[target_well] > best->probabilities[target_well] + 1e-12)
            best = &s;
    }
    return best->pattern;
}

std::vector<TableCheck> validate_table(std::shared_ptr<const EigenSolution> basis, const PotentialProfile& profile)
{
    if (profile.well_regions.size() != 6)
        throw DomainError("table validation needs a six-well profile");
    std::vector<TableCheck> out;
    for (std::size_t w = 0; w < 6; ++w)
    {
        TableCheck check;
        check.table = score(basis, profile, table_pattern(6, w));
        check.brute_force = score(basis, profile, best_sign_pattern(basis, profile, w));
        check.table_localizes = localizes(check.table, w);
        check.agrees = check.table.pattern.signs == check.brute_force.pattern.signs;
        out.push_back(std::move(check));
    }
    return out;
}

double two_well_hop_period(const EigenSolution& basis)
{
    if (basis.size() < 2)
        throw InvalidBasisError("hop period needs at least two eigenstates");
    const double gap = basis.energies[1] - basis.energies[0];
    if (!(gap > 0.0))
        throw InvalidBasisError("hop period needs E2 > E1");
    return kPi * basis.units.hbar / gap;
}

double hop_period_at(const MultiWellSpec& geometry, double barrier_height_eV, const DesignOptions& options)
{
    MultiWellSpec spec = geometry;
    spec.barrier_height_eV = barrier_height_eV;
    if (spec.well_count != 2)
        throw DomainError("hop period design needs a two-well geometry");
    const auto profile = build_multiwell(spec);
    const Grid grid(spec.total_length_nm, options.grid_points);
    const auto h = assemble(sample(profile, grid), grid, options.units);
    return two_well_hop_period(lowest_eigenpairs(h, 2, options.solver));
}

BarrierDesign inverse_barrier_height(const MultiWellSpec& geometry, double target_period_fs, double lo_eV,
                                     double hi_eV, const DesignOptions& options)
{
    if (!(target_period_fs > 0.0))
        throw DomainError("target period must be positive");
    if (!(lo_eV >= 0.0 && hi_eV > lo_eV))
        throw BracketError("bracket must satisfy 0 <= lo < hi");

    const double p_lo = hop_period_at(geometry, lo_eV, options);
    const double p_hi = hop_period_at(geometry, hi_eV, options);
    const double p_mid = hop_period_at(geometry, 0.5 * (lo_eV + hi_eV), options);
    if (!(p_lo < p_mid && p_mid < p_hi))
    {
        std::ostringstream msg;
        msg << "hop period is not increasing over [" << lo_eV << ", " << hi_eV << "] eV: " << p_lo << ", " << p_mid
            << ", " << p_hi << " fs";
        throw NonMonotonicError(msg.str());
    }
    if ((p_lo - target_period_fs) * (p_hi - target_period_fs) > 0.0)
    {
        std::ostringstream msg;
        msg << "target " << target_period_fs << " fs outside bracket periods [" << p_lo << ", " << p_hi << "] fs";
        throw BracketError(msg.str());
    }

    double lo = lo_eV;
    double hi = hi_eV;
    for (int it = 1; it <= options.max_iterations; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        const double p = hop_period_at(geometry, mid, options);
        if (std::abs(p - target_period_fs) / target_period_fs < options.rel_tol)
            return {mid, p, it};
        if (p < target_period_fs)
            lo = mid;
        else
            hi = mid;
    }
    const double mid = 0.5 * (lo + hi);
    return {mid, hop_period_at(geometry, mid, options), options.max_iterations};
}

}  // namespace qwell
