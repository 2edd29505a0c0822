#pragma once

#include <cstddef>
#include <vector>

#include "qwell/core.hpp"

namespace qwell {

/// Symmetric N-well layout: N equal wells separated by N-1 equal barriers.
struct MultiWellSpec
{
    double total_length_nm = 100.0;
    int well_count = 1;
    double barrier_width_nm = 0.0;
    double barrier_height_eV = 0.0;
    double well_depth_eV = 0.0;

    double well_width_nm() const;

    /// Throws GeometryError/DomainError naming the offending dimension.
    void validate() const;
};

struct Segment
{
    double start_nm;
    double end_nm;
    double value_eV;
};

struct Interval
{
    double start_nm;
    double end_nm;
    double width() const { return end_nm - start_nm; }
};

/// Piecewise-constant potential tiling [0, L].
///
/// Segments alternate well, barrier, well, ...; segment 2j is well j and
/// segment 2j+1 is barrier j.
struct PotentialProfile
{
    MultiWellSpec spec;
    std::vector<Segment> segments;
    std::vector<Interval> well_regions;
};

PotentialProfile build_multiwell(const MultiWellSpec& spec);

/// Segment index owning each interior node of the grid.
///
/// A node lying exactly on an edge belongs to the segment on the wall side
/// of the mirrored coordinate min(x, L - x), which keeps the assignment
/// symmetric under x -> L - x.
std::vector<std::size_t> segment_of_nodes(const PotentialProfile& profile, const Grid& grid);

/// Potential value per interior node [eV]: the average of the profile over
/// the node's cell [x - h/2, x + h/2]. Cells inside one segment take its
/// value exactly; only cells straddling an edge are blended.
std::vector<double> sample(const PotentialProfile& profile, const Grid& grid);

}  // namespace qwell
