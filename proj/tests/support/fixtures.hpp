#pragma once

#include <memory>

#include "qwell/potential.hpp"
#include "qwell/spectral.hpp"

namespace fixtures {

/// Mass used by the multi-well scenarios.
inline constexpr double kLightMass = 0.008;

inline qwell::MultiWellSpec multiwell(int wells, double barrier_eV = 0.5)
{
    qwell::MultiWellSpec s;
    s.total_length_nm = 100.0;
    s.well_count = wells;
    if (wells > 1)
    {
        s.barrier_width_nm = 4.2;
        s.barrier_height_eV = barrier_eV;
    }
    return s;
}

inline qwell::UnitSystem units(double mass_ratio = 1.0)
{
    qwell::UnitSystem u;
    u.effective_mass_ratio = mass_ratio;
    return u;
}

struct System
{
    qwell::PotentialProfile profile;
    qwell::Grid grid;
    qwell::TridiagonalHamiltonian hamiltonian;
    std::shared_ptr<const qwell::EigenSolution> basis;
};

inline System solve(const qwell::MultiWellSpec& spec, std::size_t k, double mass_ratio, std::size_t points = 2000)
{
    auto profile = qwell::build_multiwell(spec);
    qwell::Grid grid(spec.total_length_nm, points);
    auto h = qwell::assemble(qwell::sample(profile, grid), grid, units(mass_ratio));
    auto basis = std::make_shared<const qwell::EigenSolution>(qwell::lowest_eigenpairs(h, k));
    return {std::move(profile), grid, std::move(h), std::move(basis)};
}

}  // namespace fixtures
