#pragma once

#include <cstddef>

#include "qwell/core.hpp"
#include "qwell/spectral.hpp"

namespace qwell {

/// E_n = hbar^2 pi^2 n^2 / (2 m L^2) [eV]; n is 1-based.
double infinite_well_energy(int n, double length_nm, const UnitSystem& units);

/// sqrt(2/L) sin(n pi x / L) on the interior nodes, renormalized under the
/// discrete inner product.
Wavefunction infinite_well_state(int n, const Grid& grid);

/// T_rev = 4 m L^2 / (hbar pi) [fs]. Satisfies T_rev * E_1 = 2 pi hbar.
double revival_time(double length_nm, const UnitSystem& units);

/// Closed-form eigenbasis of the infinite well: exact energies with the
/// sampled sine states, in the same container the numerical solver fills.
EigenSolution analytic_basis(const Grid& grid, std::size_t k, const UnitSystem& units);

}  // namespace qwell
