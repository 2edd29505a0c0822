#include "qwell/analytic.hpp"

#include <cmath>
#include <vector>

#include "qwell/errors.hpp"
#include "qwell/hash.hpp"

namespace qwell {

namespace {

void require_quantum_number(int n)
{
    if (n < 1)
        throw DomainError("quantum number must be >= 1");
}

std::vector<double> sampled_sine(int n, const Grid& grid)
{
    const double pref = std::sqrt(2.0 / grid.length());
    std::vector<double> v(grid.points());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        v[i] = pref * std::sin(n * kPi * grid.x(i) / grid.length());
        sum += v[i] * v[i];
    }
    const double s = 1.0 / std::sqrt(sum * grid.spacing());
    for (auto& x : v)
        x *= s;
    return v;
}

}  // namespace

double infinite_well_energy(int n, double length_nm, const UnitSystem& units)
{
    require_quantum_number(n);
    if (!(length_nm > 0.0))
        throw DomainError("well length must be positive");
    units.validate();
    const double nn = static_cast<double>(n);
    return units.kinetic_scale() * kPi * kPi * nn * nn / (length_nm * length_nm);
}

Wavefunction infinite_well_state(int n, const Grid& grid)
{
    require_quantum_number(n);
    const auto v = sampled_sine(n, grid);
    return Wavefunction(grid, std::span<const double>(v));
}

double revival_time(double length_nm, const UnitSystem& units)
{
    if (!(length_nm > 0.0))
        throw DomainError("well length must be positive");
    units.validate();
    return 4.0 * units.mass() * length_nm * length_nm / (units.hbar * kPi);
}

EigenSolution analytic_basis(const Grid& grid, std::size_t k, const UnitSystem& units)
{
    if (k < 1 || k > grid.points())
        throw DomainError("analytic basis size out of range");
    EigenSolution sol{grid, units, {}, {}, {}, {}, 0};
    for (std::size_t n = 1; n <= k; ++n)
    {
        sol.energies.push_back(infinite_well_energy(static_cast<int>(n), grid.length(), units));
        sol.states.push_back(sampled_sine(static_cast<int>(n), grid));
        sol.residuals.push_back(0.0);
        sol.iterations.push_back(0);
    }
    Fnv1a fp;
    fp.str("qwell.analytic.v1")
        .f64(grid.length())
        .u64(grid.points())
        .f64(units.hbar)
        .f64(units.hbar2_over_2me)
        .f64(units.effective_mass_ratio)
        .u64(k);
    sol.hamiltonian_fingerprint = fp.value();
    return sol;
}

}  // namespace qwell
