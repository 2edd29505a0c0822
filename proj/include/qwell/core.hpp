#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qwell {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Physical constants in the nm / eV / fs system used throughout the library.
struct UnitSystem
{
    /// Reduced Planck constant [eV fs].
    double hbar = 0.6582119569;
    /// hbar^2 / (2 m_e) [eV nm^2].
    double hbar2_over_2me = 0.0380998;
    /// Particle mass in units of the free-electron mass.
    double effective_mass_ratio = 1.0;

    /// hbar^2 / (2 m) [eV nm^2] for the configured particle.
    double kinetic_scale() const { return hbar2_over_2me / effective_mass_ratio; }

    /// Particle mass [eV fs^2 / nm^2].
    double mass() const { return hbar * hbar / (2.0 * kinetic_scale()); }

    /// Throws DomainError unless every constant is strictly positive.
    void validate() const;
};

/// Uniform mesh of interior nodes on [0, L] with hard walls at both ends.
///
/// Node i sits at x = (i + 1) * spacing; the wall nodes x = 0 and x = L carry
/// zero amplitude and are not stored.
class Grid
{
  public:
    Grid(double length_nm, std::size_t points);

    double length() const { return length_; }
    std::size_t points() const { return points_; }
    double spacing() const { return spacing_; }
    double x(std::size_t i) const { return static_cast<double>(i + 1) * spacing_; }

    friend bool operator==(const Grid&, const Grid&) = default;

  private:
    double length_;
    std::size_t points_;
    double spacing_;
};

/// Throws GridMismatchError if the grids differ.
void require_same_grid(const Grid& a, const Grid& b);

/// Complex amplitudes on the interior nodes of a grid.
class Wavefunction
{
  public:
    Wavefunction(Grid grid, std::vector<complex> amplitudes);
    Wavefunction(Grid grid, std::span<const double> amplitudes);

    /// All-zero state on the grid.
    static Wavefunction zeros(Grid grid);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const complex> amplitudes() const { return amplitudes_; }
    std::span<complex> amplitudes() { return amplitudes_; }
    complex operator[](std::size_t i) const { return amplitudes_[i]; }
    complex& operator[](std::size_t i) { return amplitudes_[i]; }

    /// |psi_i|^2 per node.
    std::vector<double> density() const;

  private:
    Grid grid_;
    std::vector<complex> amplitudes_;
};

/// Rectangle-rule inner product sum_i conj(a_i) b_i h.
complex inner_product(const Wavefunction& a, const Wavefunction& b);

/// sqrt(<psi|psi>).
double norm(const Wavefunction& psi);

/// psi / ||psi||; throws DegenerateStateError for a zero state.
Wavefunction normalize(const Wavefunction& psi);

/// alpha * a + beta * b on a shared grid.
Wavefunction combine(complex alpha, const Wavefunction& a, complex beta, const Wavefunction& b);

}  // namespace qwell
