#include "qwell/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwell/errors.hpp"

namespace qwell {

double MultiWellSpec::well_width_nm() const
{
    return (total_length_nm - static_cast<double>(well_count - 1) * barrier_width_nm) /
           static_cast<double>(well_count);
}

void MultiWellSpec::validate() const
{
    if (well_count < 1)
    {
        throw DomainError("well_count must be at least 1");
    }
    if (!(total_length_nm > 0.0) || !std::isfinite(total_length_nm))
    {
        throw GeometryError("total_length_nm must be positive");
    }
    if (well_count > 1 && !(barrier_width_nm > 0.0))
    {
        throw GeometryError("barrier_width_nm must be positive when well_count > 1");
    }
    if (!(barrier_height_eV >= 0.0) || !std::isfinite(barrier_height_eV))
    {
        throw GeometryError("barrier_height_eV must be non-negative");
    }
    if (!std::isfinite(well_depth_eV))
    {
        throw GeometryError("well_depth_eV must be finite");
    }
    if (!(well_width_nm() > 0.0))
    {
        std::ostringstream msg;
        msg << "barrier_width_nm too wide: " << (well_count - 1) << " barriers of " << barrier_width_nm
            << " nm leave no room for wells in " << total_length_nm << " nm";
        throw GeometryError(msg.str());
    }
}

PotentialProfile build_multiwell(const MultiWellSpec& spec)
{
    spec.validate();
    PotentialProfile profile{spec, {}, {}};
    const double well = spec.well_width_nm();
    const double pitch = well + spec.barrier_width_nm;
    const int n = spec.well_count;
    for (int j = 0; j < n; ++j)
    {
        const double start = j == 0 ? 0.0 : profile.segments.back().end_nm;
        const double end = j == n - 1 ? spec.total_length_nm : static_cast<double>(j) * pitch + well;
        profile.segments.push_back({start, end, spec.well_depth_eV});
        profile.well_regions.push_back({start, end});
        if (j < n - 1)
        {
            const double bend = static_cast<double>(j + 1) * pitch;
            profile.segments.push_back({end, bend, spec.barrier_height_eV});
        }
    }
    return profile;
}

std::vector<std::size_t> segment_of_nodes(const PotentialProfile& profile, const Grid& grid)
{
    if (std::abs(grid.length() - profile.spec.total_length_nm) > 1e-12 * profile.spec.total_length_nm)
    {
        throw GridMismatchError("grid length does not match profile total_length_nm");
    }
    const std::size_t points = grid.points();
    const auto& segs = profile.segments;
    const std::size_t last = segs.size() - 1;
    std::vector<std::size_t> owner(points);
    // Nodes within roundoff of an edge count as lying on it.
    const double tol = 1e-9 * grid.spacing();
    for (std::size_t i = 0; i < points; ++i)
    {
        // Distance from the nearer wall, computed from node counts so that
        // node i and node points-1-i see bit-identical coordinates.
        const std::size_t from_left = i + 1;
        const std::size_t from_right = points - i;
        const bool left_half = from_left <= from_right;
        const double d = static_cast<double>(left_half ? from_left : from_right) * grid.spacing();
        std::size_t k = 0;
        while (k < last && d > segs[k].end_nm + tol)
        {
            ++k;
        }
        owner[i] = left_half ? k : last - k;
    }
    return owner;
}

std::vector<double> sample(const PotentialProfile& profile, const Grid& grid)
{
    const auto owner = segment_of_nodes(profile, grid);
    const auto& segs = profile.segments;
    const std::size_t points = grid.points();
    const double h = grid.spacing();
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i)
    {
        // Average over the cell [d - h/2, d + h/2] in mirrored coordinates.
        const std::size_t from_left = i + 1;
        const std::size_t from_right = points - i;
        const double d = static_cast<double>(std::min(from_left, from_right)) * h;
        const double a = d - 0.5 * h;
        const double b = d + 0.5 * h;
        double integral = 0.0;
        std::size_t touched = 0;
        std::size_t only = 0;
        for (std::size_t k = 0; k < segs.size(); ++k)
        {
            const double overlap = std::min(b, segs[k].end_nm) - std::max(a, segs[k].start_nm);
            if (overlap > 1e-12 * h)
            {
                integral += overlap * segs[k].value_eV;
                ++touched;
                only = k;
            }
        }
        if (touched <= 1)
            v[i] = touched == 1 ? segs[only].value_eV : profile.segments[owner[i]].value_eV;
        else
            v[i] = integral / h;
    }
    return v;
}

}  // namespace qwell
