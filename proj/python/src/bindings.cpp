#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwell/analytic.hpp"
#include "qwell/design.hpp"
#include "qwell/dynamics.hpp"
#include "qwell/errors.hpp"
#include "qwell/potential.hpp"
#include "qwell/scenario.hpp"
#include "qwell/spectral.hpp"

namespace py = pybind11;
using namespace qwell;

namespace {

// pybind11 holders must be non-const; the library accepts them as const.
using Basis = std::shared_ptr<EigenSolution>;

py::array_t<double> to_array(const std::vector<double>& v)
{
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> states_array(const EigenSolution& s)
{
    py::array_t<double> out({static_cast<py::ssize_t>(s.size()), static_cast<py::ssize_t>(s.grid.points())});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t n = 0; n < s.size(); ++n)
        for (std::size_t i = 0; i < s.grid.points(); ++i)
            m(n, i) = s.states[n][i];
    return out;
}

py::array_t<complex> wave_array(const Wavefunction& psi)
{
    return py::array_t<complex>(static_cast<py::ssize_t>(psi.size()), psi.amplitudes().data());
}

Basis solve(const MultiWellSpec& spec, std::size_t points, std::size_t k, const UnitSystem& units,
            std::uint64_t seed)
{
    const auto profile = build_multiwell(spec);
    const Grid grid(spec.total_length_nm, points);
    SolverOptions opts;
    opts.seed = seed;
    return std::make_shared<EigenSolution>(lowest_eigenpairs(assemble(sample(profile, grid), grid, units), k, opts));
}

py::dict bundle_dict(const ArtifactBundle& b)
{
    py::dict d;
    for (const auto& a : b.artifacts)
        d[py::str(a.name)] = a.content;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Multi-well quantum dynamics: eigenstates, localized states and hopping";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<BracketError>(m, "BracketError", base.ptr());
    py::register_exception<NonMonotonicError>(m, "NonMonotonicError", base.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());

    py::class_<UnitSystem>(m, "UnitSystem")
        .def(py::init([](double mass) {
                 UnitSystem u;
                 u.effective_mass_ratio = mass;
                 u.validate();
                 return u;
             }),
             py::arg("effective_mass_ratio") = 1.0)
        .def_readonly("hbar", &UnitSystem::hbar)
        .def_readonly("hbar2_over_2me", &UnitSystem::hbar2_over_2me)
        .def_readonly("effective_mass_ratio", &UnitSystem::effective_mass_ratio)
        .def_property_readonly("kinetic_scale", &UnitSystem::kinetic_scale)
        .def_property_readonly("mass", &UnitSystem::mass);

    py::class_<MultiWellSpec>(m, "MultiWellSpec")
        .def(py::init([](double length, int wells, double bw, double bh, double depth) {
                 MultiWellSpec s{length, wells, bw, bh, depth};
                 s.validate();
                 return s;
             }),
             py::arg("total_length_nm") = 100.0, py::arg("well_count") = 1, py::arg("barrier_width_nm") = 0.0,
             py::arg("barrier_height_eV") = 0.0, py::arg("well_depth_eV") = 0.0)
        .def_readonly("total_length_nm", &MultiWellSpec::total_length_nm)
        .def_readonly("well_count", &MultiWellSpec::well_count)
        .def_readonly("barrier_width_nm", &MultiWellSpec::barrier_width_nm)
        .def_readonly("barrier_height_eV", &MultiWellSpec::barrier_height_eV)
        .def_property_readonly("well_width_nm", &MultiWellSpec::well_width_nm);

    m.def(
        "sample_potential",
        [](const MultiWellSpec& spec, std::size_t points) {
            return to_array(sample(build_multiwell(spec), Grid(spec.total_length_nm, points)));
        },
        py::arg("spec"), py::arg("points"), "Potential per interior node [eV].");

    py::class_<EigenSolution, Basis>(m, "EigenSolution")
        .def_property_readonly("energies", [](const EigenSolution& s) { return to_array(s.energies); })
        .def_property_readonly("states", &states_array)
        .def_property_readonly("residuals", [](const EigenSolution& s) { return to_array(s.residuals); })
        .def_property_readonly("x_nm",
                               [](const EigenSolution& s) {
                                   std::vector<double> x(s.grid.points());
                                   for (std::size_t i = 0; i < x.size(); ++i)
                                       x[i] = s.grid.x(i);
                                   return to_array(x);
                               })
        .def_property_readonly("spacing", [](const EigenSolution& s) { return s.grid.spacing(); })
        .def_property_readonly("fingerprint", [](const EigenSolution& s) { return s.hamiltonian_fingerprint; })
        .def("__len__", &EigenSolution::size);

    m.def("solve", &solve, py::arg("spec"), py::arg("points") = 2000, py::arg("k") = 2,
          py::arg("units") = UnitSystem{}, py::arg("seed") = kDefaultSeed,
          "Lowest k eigenpairs of the multi-well profile.");
    m.def(
        "analytic_basis",
        [](double length, std::size_t points, std::size_t k, const UnitSystem& u) {
            return std::make_shared<EigenSolution>(analytic_basis(Grid(length, points), k, u));
        },
        py::arg("length_nm"), py::arg("points"), py::arg("k"), py::arg("units") = UnitSystem{});
    m.def("infinite_well_energy", &infinite_well_energy, py::arg("n"), py::arg("length_nm"),
          py::arg("units") = UnitSystem{});
    m.def("revival_time", &revival_time, py::arg("length_nm"), py::arg("units") = UnitSystem{});
    m.def("orthonormality_defect", &orthonormality_defect);

    py::class_<SpectralState>(m, "SpectralState")
        .def(py::init([](Basis b, std::vector<complex> c) { return SpectralState::normalized(std::move(b), std::move(c)); }),
             py::arg("basis"), py::arg("coefficients"))
        .def_readonly("coefficients", &SpectralState::coefficients)
        .def_readonly("captured_weight", &SpectralState::captured_weight)
        .def("evolve", [](const SpectralState& s, double tau) { return wave_array(evolve(s, tau)); }, py::arg("tau"));

    m.def(
        "gaussian_state",
        [](Basis b, double center, double width, double k0) {
            return project(gaussian_packet(b->grid, center, width, k0), b);
        },
        py::arg("basis"), py::arg("center_nm"), py::arg("width_nm"), py::arg("wavenumber_per_nm") = 0.0,
        "Projection of a Gaussian packet onto the basis.");
    m.def(
        "localized_state",
        [](Basis b, std::vector<int> signs) { return localized_state(std::move(b), SignPattern{std::move(signs), 0}); },
        py::arg("basis"), py::arg("signs"));
    m.def(
        "best_sign_pattern",
        [](const MultiWellSpec& spec, Basis b, std::size_t target) {
            return best_sign_pattern(std::move(b), build_multiwell(spec), target).signs;
        },
        py::arg("spec"), py::arg("basis"), py::arg("target_well"), "Brute-force optimum; target_well is 0-based.");
    m.def(
        "table_pattern", [](std::size_t target) { return table_pattern(6, target).signs; }, py::arg("target_well"));
    m.def(
        "well_probabilities",
        [](const MultiWellSpec& spec, const SpectralState& s, double tau) {
            return well_probabilities(evolve(s, tau), build_multiwell(spec));
        },
        py::arg("spec"), py::arg("state"), py::arg("tau") = 0.0);

    m.def(
        "autocorrelation",
        [](const SpectralState& s, double tau_max, std::size_t samples) {
            const auto t = autocorrelation(s, TauAxis{tau_max, samples});
            return py::make_tuple(to_array(t.tau), to_array(t.values));
        },
        py::arg("state"), py::arg("tau_max") = 2.0, py::arg("samples") = 2048);
    m.def(
        "well_correlation",
        [](const std::vector<SpectralState>& refs, const SpectralState& s, double tau_max, std::size_t samples) {
            const auto traces = well_correlation(refs, s, TauAxis{tau_max, samples});
            py::list values;
            for (const auto& t : traces)
                values.append(to_array(t.values));
            return py::make_tuple(to_array(TauAxis{tau_max, samples}.values()), values);
        },
        py::arg("references"), py::arg("state"), py::arg("tau_max") = 2.0, py::arg("samples") = 2048);
    m.def(
        "detect_hops",
        [](std::vector<double> tau, std::vector<double> values, double threshold) {
            const auto r = detect_hops(CorrelationTrace{std::move(tau), std::move(values), ""}, threshold);
            std::vector<std::pair<double, double>> peaks;
            for (const auto& e : r.peaks)
                peaks.emplace_back(e.tau, e.value);
            return py::make_tuple(peaks, r.period_tau);
        },
        py::arg("tau"), py::arg("values"), py::arg("threshold") = 0.9,
        "Returns ([(tau, value), ...], period_tau or None).");

    m.def("two_well_hop_period", [](Basis b) { return two_well_hop_period(*b); });
    m.def(
        "inverse_barrier_height",
        [](const MultiWellSpec& geometry, double target_fs, double lo, double hi, const UnitSystem& u,
           std::size_t points, double rel_tol) {
            DesignOptions o;
            o.units = u;
            o.grid_points = points;
            o.rel_tol = rel_tol;
            const auto d = inverse_barrier_height(geometry, target_fs, lo, hi, o);
            return py::make_tuple(d.barrier_height_eV, d.period_fs, d.iterations);
        },
        py::arg("geometry"), py::arg("target_period_fs"), py::arg("lo_eV"), py::arg("hi_eV"),
        py::arg("units") = UnitSystem{}, py::arg("points") = 2000, py::arg("rel_tol") = 1e-3,
        "Returns (barrier_height_eV, period_fs, iterations).");

    m.def(
        "config_fingerprint", [](const std::string& text) { return parse_config(text).fingerprint_hex(); },
        py::arg("config_json"));
    const std::vector<std::pair<const char*, ArtifactBundle (*)(const ScenarioConfig&, const RunContext&)>> workflows{
        {"run_solve", run_solve},     {"run_design", run_design}, {"run_evolve", run_evolve},
        {"run_correlate", run_correlate}, {"run_sweep", run_sweep}, {"run_inverse", run_inverse},
        {"run_scenario", run_scenario},
    };
    for (const auto& [name, fn] : workflows)
    {
        m.def(
            name,
            [fn = fn](const std::string& text, std::optional<std::string> cache_dir) {
                RunContext ctx;
                if (cache_dir)
                    ctx.cache_dir = *cache_dir;
                return bundle_dict(fn(parse_config(text), ctx));
            },
            py::arg("config_json"), py::arg("cache_dir") = py::none(),
            "Runs the workflow on a JSON config; returns {artifact name: CSV text}.");
    }
}
