#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qwell/core.hpp"
#include "qwell/potential.hpp"
#include "qwell/spectral.hpp"

namespace qwell {

/// Uniform scaled-time axis tau = t / T_rev on [0, tau_max].
struct TauAxis
{
    double tau_max = 2.0;
    std::size_t samples = 2048;

    void validate() const;
    double step() const { return tau_max / static_cast<double>(samples - 1); }
    double at(std::size_t j) const { return static_cast<double>(j) * step(); }
    std::vector<double> values() const;
};

/// Expansion coefficients c_n of a state in a fixed eigenbasis.
struct SpectralState
{
    std::shared_ptr<const EigenSolution> basis;
    std::vector<complex> coefficients;
    /// sum |<phi_n|psi0>|^2 before renormalization (1 for states built in
    /// coefficient space).
    double captured_weight = 1.0;

    /// Validates sum |c_n|^2 = 1 within 1e-10.
    SpectralState(std::shared_ptr<const EigenSolution> basis, std::vector<complex> coefficients,
                  double captured_weight = 1.0);

    /// Rescales arbitrary coefficients to unit norm first.
    static SpectralState normalized(std::shared_ptr<const EigenSolution> basis, std::vector<complex> coefficients);
};

/// Squared overlaps sampled on a tau axis.
struct CorrelationTrace
{
    std::vector<double> tau;
    std::vector<double> values;
    std::string reference_label;
};

struct HopEvent
{
    double tau;
    double value;
};

struct HopReport
{
    std::vector<HopEvent> peaks;
    /// Mean spacing of consecutive peaks; empty with fewer than two peaks.
    std::optional<double> period_tau;
    double threshold = 0.9;
};

/// Minimum captured weight accepted by project().
inline constexpr double kMinCapturedWeight = 0.999;

/// Normalized Gaussian packet exp(-(x-x0)^2/(2 w^2) + i k0 x) on the grid.
Wavefunction gaussian_packet(const Grid& grid, double center_nm, double width_nm, double wavenumber_per_nm = 0.0);

/// c_n = <phi_n|psi0>. Throws TruncationError when sum |c_n|^2 < min_weight.
SpectralState project(const Wavefunction& psi0, std::shared_ptr<const EigenSolution> basis,
                      double min_weight = kMinCapturedWeight);

/// Revival time of the infinite well spanning the basis grid.
double basis_revival_time(const EigenSolution& basis);

/// psi(x, tau) = sum_n c_n phi_n(x) exp(-i E_n tau T_rev / hbar).
Wavefunction evolve(const SpectralState& state, double tau);

/// |sum_n |c_n|^2 exp(i E_n T_rev tau / hbar)|^2.
CorrelationTrace autocorrelation(const SpectralState& state, const TauAxis& axis);

/// trace_k(tau) = |<ref_k(0)|psi(tau)>|^2 evaluated in coefficient space.
std::vector<CorrelationTrace> well_correlation(const std::vector<SpectralState>& references,
                                               const SpectralState& evolving, const TauAxis& axis,
                                               const std::vector<std::string>& labels = {});

/// sum over nodes of well `well_index` (0-based) of |psi_i|^2 h.
double probability_in_well(const Wavefunction& psi, const PotentialProfile& profile, std::size_t well_index);

/// Probability in every well, in order.
std::vector<double> well_probabilities(const Wavefunction& psi, const PotentialProfile& profile);

/// Strict interior local maxima above `threshold`, refined by a parabola
/// through the three samples around each maximum.
HopReport detect_hops(const CorrelationTrace& trace, double threshold = 0.9);

}  // namespace qwell
