#include "qwell/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "qwell/analytic.hpp"
#include "qwell/errors.hpp"

namespace qwell {

namespace {

double weight(const std::vector<complex>& c)
{
    double s = 0.0;
    for (const auto& z : c)
        s += std::norm(z);
    return s;
}

// E_n T_rev / hbar: phase rate per unit tau.
std::vector<double> angular_rates(const EigenSolution& basis)
{
    const double trev = basis_revival_time(basis);
    std::vector<double> w(basis.size());
    for (std::size_t n = 0; n < w.size(); ++n)
        w[n] = basis.energies[n] * trev / basis.units.hbar;
    return w;
}

void require_same_basis(const SpectralState& a, const SpectralState& b)
{
    if (a.basis == b.basis)
        return;
    if (!a.basis || !b.basis || a.basis->hamiltonian_fingerprint != b.basis->hamiltonian_fingerprint ||
        a.basis->energies != b.basis->energies || a.coefficients.size() != b.coefficients.size())
    {
        throw BasisMismatchError("spectral states were built on different eigenbases");
    }
}

}  // namespace

void TauAxis::validate() const
{
    if (samples < 2)
        throw DomainError("tau axis needs at least 2 samples");
    if (!(tau_max > 0.0) || !std::isfinite(tau_max))
        throw DomainError("tau_max must be positive");
}

std::vector<double> TauAxis::values() const
{
    validate();
    std::vector<double> out(samples);
    for (std::size_t j = 0; j < samples; ++j)
        out[j] = at(j);
    return out;
}

SpectralState::SpectralState(std::shared_ptr<const EigenSolution> basis_, std::vector<complex> coefficients_,
                             double captured_weight_)
    : basis(std::move(basis_)), coefficients(std::move(coefficients_)), captured_weight(captured_weight_)
{
    if (!basis)
        throw InvalidBasisError("spectral state needs a basis");
    if (coefficients.size() != basis->size())
        throw DomainError("coefficient count does not match basis size");
    const double w = weight(coefficients);
    if (std::abs(w - 1.0) > 1e-10)
    {
        std::ostringstream msg;
        msg << "coefficients are not normalized: sum |c|^2 = " << w;
        throw DomainError(msg.str());
    }
}

SpectralState SpectralState::normalized(std::shared_ptr<const EigenSolution> basis, std::vector<complex> coefficients)
{
    const double w = weight(coefficients);
    if (!(w > 0.0))
        throw DegenerateStateError("all coefficients are zero");
    const double s = 1.0 / std::sqrt(w);
    for (auto& z : coefficients)
        z *= s;
    return SpectralState(std::move(basis), std::move(coefficients));
}

Wavefunction gaussian_packet(const Grid& grid, double center_nm, double width_nm, double wavenumber_per_nm)
{
    if (!(width_nm > 0.0))
        throw DomainError("packet width must be positive");
    std::vector<complex> a(grid.points());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double u = (grid.x(i) - center_nm) / width_nm;
        a[i] = std::polar(std::exp(-0.5 * u * u), wavenumber_per_nm * grid.x(i));
    }
    return normalize(Wavefunction(grid, std::move(a)));
}

SpectralState project(const Wavefunction& psi0, std::shared_ptr<const EigenSolution> basis, double min_weight)
{
    if (!basis)
        throw InvalidBasisError("project needs a basis");
    require_same_grid(psi0.grid(), basis->grid);
    std::vector<complex> c(basis->size());
    for (std::size_t n = 0; n < c.size(); ++n)
        c[n] = inner_product(basis->state(n), psi0);
    const double captured = weight(c);
    if (captured < min_weight)
    {
        std::ostringstream msg;
        msg << "basis of " << basis->size() << " states captures only " << captured
            << " of the initial state; increase the number of states";
        throw TruncationError(msg.str(), captured);
    }
    const double s = 1.0 / std::sqrt(captured);
    for (auto& z : c)
        z *= s;
    return SpectralState(std::move(basis), std::move(c), captured);
}

double basis_revival_time(const EigenSolution& basis)
{
    return revival_time(basis.grid.length(), basis.units);
}

Wavefunction evolve(const SpectralState& state, double tau)
{
    if (!(tau >= 0.0))
        throw DomainError("tau must be non-negative");
    const auto& basis = *state.basis;
    const auto rates = angular_rates(basis);
    std::vector<complex> psi(basis.grid.points());
    for (std::size_t n = 0; n < basis.size(); ++n)
    {
        const complex amp = state.coefficients[n] * std::polar(1.0, -rates[n] * tau);
        const auto& phi = basis.states[n];
        for (std::size_t i = 0; i < psi.size(); ++i)
            psi[i] += amp * phi[i];
    }
    return Wavefunction(basis.grid, std::move(psi));
}

CorrelationTrace autocorrelation(const SpectralState& state, const TauAxis& axis)
{
    CorrelationTrace out{axis.values(), {}, "autocorrelation"};
    const auto rates = angular_rates(*state.basis);
    out.values.resize(out.tau.size());
    for (std::size_t j = 0; j < out.tau.size(); ++j)
    {
        complex a{0.0, 0.0};
        for (std::size_t n = 0; n < rates.size(); ++n)
            a += std::norm(state.coefficients[n]) * std::polar(1.0, rates[n] * out.tau[j]);
        out.values[j] = std::norm(a);
    }
    return out;
}

std::vector<CorrelationTrace> well_correlation(const std::vector<SpectralState>& references,
                                               const SpectralState& evolving, const TauAxis& axis,
                                               const std::vector<std::string>& labels)
{
    if (!labels.empty() && labels.size() != references.size())
        throw DomainError("label count does not match reference count");
    for (const auto& ref : references)
        require_same_basis(ref, evolving);
    const auto taus = axis.values();
    const auto rates = angular_rates(*evolving.basis);
    const std::size_t k = rates.size();

    // conj(c_n^(ref)) c_n, then phase-rotate per tau.
    std::vector<std::vector<complex>> weights;
    for (const auto& ref : references)
    {
        std::vector<complex> w(k);
        for (std::size_t n = 0; n < k; ++n)
            w[n] = std::conj(ref.coefficients[n]) * evolving.coefficients[n];
        weights.push_back(std::move(w));
    }

    std::vector<CorrelationTrace> out;
    for (std::size_t r = 0; r < references.size(); ++r)
    {
        CorrelationTrace t{taus, std::vector<double>(taus.size()),
                           labels.empty() ? "ref" + std::to_string(r + 1) : labels[r]};
        out.push_back(std::move(t));
    }
    std::vector<complex> phase(k);
    for (std::size_t j = 0; j < taus.size(); ++j)
    {
        for (std::size_t n = 0; n < k; ++n)
            phase[n] = std::polar(1.0, -rates[n] * taus[j]);
        for (std::size_t r = 0; r < references.size(); ++r)
        {
            complex s{0.0, 0.0};
            for (std::size_t n = 0; n < k; ++n)
                s += weights[r][n] * phase[n];
            out[r].values[j] = std::norm(s);
        }
    }
    return out;
}

double probability_in_well(const Wavefunction& psi, const PotentialProfile& profile, std::size_t well_index)
{
    if (well_index >= profile.well_regions.size())
    {
        std::ostringstream msg;
        msg << "well index " << well_index << " out of range for " << profile.well_regions.size() << " wells";
        throw DomainError(msg.str());
    }
    return well_probabilities(psi, profile)[well_index];
}

std::vector<double> well_probabilities(const Wavefunction& psi, const PotentialProfile& profile)
{
    const auto owner = segment_of_nodes(profile, psi.grid());
    std::vector<double> p(profile.well_regions.size(), 0.0);
    for (std::size_t i = 0; i < owner.size(); ++i)
    {
        if (owner[i] % 2 == 0)
            p[owner[i] / 2] += std::norm(psi[i]);
    }
    for (auto& v : p)
        v *= psi.grid().spacing();
    return p;
}

HopReport detect_hops(const CorrelationTrace& trace, double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0))
        throw DomainError("hop threshold must lie in (0, 1)");
    const auto& v = trace.values;
    const auto& t = trace.tau;
    if (v.size() != t.size())
        throw DomainError("trace tau and value lengths differ");
    HopReport report;
    report.threshold = threshold;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
    {
        if (!(v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > threshold))
            continue;
        const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        const double delta = denom != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / denom : 0.0;
        const double step = 0.5 * (t[i + 1] - t[i - 1]);
        report.peaks.push_back({t[i] + delta * step, v[i] - 0.25 * (v[i - 1] - v[i + 1]) * delta});
    }
    if (report.peaks.size() >= 2)
    {
        const auto& p = report.peaks;
        report.period_tau = (p.back().tau - p.front().tau) / static_cast<double>(p.size() - 1);
    }
    return report;
}

}  // namespace qwell
