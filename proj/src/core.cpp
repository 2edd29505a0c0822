#include "qwell/core.hpp"

#include <cmath>
#include <sstream>

#include "qwell/errors.hpp"

namespace qwell {

void UnitSystem::validate() const
{
    if (!(hbar > 0.0) || !(hbar2_over_2me > 0.0) || !(effective_mass_ratio > 0.0))
    {
        throw DomainError("unit system constants must be positive");
    }
}

Grid::Grid(double length_nm, std::size_t points)
    : length_(length_nm), points_(points), spacing_(length_nm / static_cast<double>(points + 1))
{
    if (!(length_nm > 0.0) || !std::isfinite(length_nm))
    {
        throw DomainError("grid length must be positive and finite");
    }
    if (points < 3)
    {
        throw DomainError("grid needs at least 3 interior points");
    }
}

void require_same_grid(const Grid& a, const Grid& b)
{
    if (a == b)
    {
        return;
    }
    std::ostringstream msg;
    msg << "grid mismatch: (L=" << a.length() << " nm, " << a.points() << " points) vs (L=" << b.length()
        << " nm, " << b.points() << " points)";
    throw GridMismatchError(msg.str());
}

Wavefunction::Wavefunction(Grid grid, std::vector<complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() != grid_.points())
    {
        throw GridMismatchError("amplitude count does not match grid points");
    }
}

Wavefunction::Wavefunction(Grid grid, std::span<const double> amplitudes)
    : Wavefunction(grid, std::vector<complex>(amplitudes.begin(), amplitudes.end()))
{
}

Wavefunction Wavefunction::zeros(Grid grid)
{
    return Wavefunction(grid, std::vector<complex>(grid.points()));
}

std::vector<double> Wavefunction::density() const
{
    std::vector<double> out(amplitudes_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] = std::norm(amplitudes_[i]);
    }
    return out;
}

complex inner_product(const Wavefunction& a, const Wavefunction& b)
{
    require_same_grid(a.grid(), b.grid());
    complex sum{0.0, 0.0};
    const auto lhs = a.amplitudes();
    const auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i)
    {
        sum += std::conj(lhs[i]) * rhs[i];
    }
    return sum * a.grid().spacing();
}

double norm(const Wavefunction& psi)
{
    double sum = 0.0;
    for (const auto& z : psi.amplitudes())
    {
        sum += std::norm(z);
    }
    return std::sqrt(sum * psi.grid().spacing());
}

Wavefunction normalize(const Wavefunction& psi)
{
    const double n = norm(psi);
    if (!(n > 0.0) || !std::isfinite(n))
    {
        throw DegenerateStateError("cannot normalize a zero or non-finite state");
    }
    Wavefunction out = psi;
    for (auto& z : out.amplitudes())
    {
        z /= n;
    }
    return out;
}

Wavefunction combine(complex alpha, const Wavefunction& a, complex beta, const Wavefunction& b)
{
    require_same_grid(a.grid(), b.grid());
    Wavefunction out = Wavefunction::zeros(a.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] = alpha * a[i] + beta * b[i];
    }
    return out;
}

}  // namespace qwell
