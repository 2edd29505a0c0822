#include "qwell/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qwell/analytic.hpp"
#include "qwell/errors.hpp"
#include "qwell/hash.hpp"

namespace qwell {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : obj.items())
    {
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback)
{
    if (!obj.contains(key))
        return fallback;
    try
    {
        return obj.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
T require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
        throw ConfigError(std::string("missing '") + key + "' in " + where);
    return get_or<T>(obj, key, T{});
}

std::size_t well_index_from_json(const json& obj, const char* key, const std::string& where)
{
    const auto one_based = require<long long>(obj, key, where);
    if (one_based < 1)
        throw ConfigError(std::string("'") + key + "' is 1-based and must be >= 1");
    return static_cast<std::size_t>(one_based - 1);
}

InitialState parse_initial(const json& j)
{
    if (!j.is_object())
        throw ConfigError("initial_state must be an object");
    const auto type = require<std::string>(j, "type", "initial_state");
    if (type == "sign_pattern")
    {
        reject_unknown(j, {"type", "target_well", "source"}, "initial_state");
        PatternInitial p;
        p.target_well = well_index_from_json(j, "target_well", "initial_state");
        const auto source = get_or<std::string>(j, "source", "best");
        if (source == "best")
            p.source = PatternInitial::Source::best;
        else if (source == "table")
            p.source = PatternInitial::Source::table;
        else
            throw ConfigError("initial_state.source must be 'best' or 'table'");
        return p;
    }
    if (type == "signs")
    {
        reject_unknown(j, {"type", "signs"}, "initial_state");
        return SignsInitial{require<std::vector<int>>(j, "signs", "initial_state")};
    }
    if (type == "coefficients")
    {
        reject_unknown(j, {"type", "real", "imag"}, "initial_state");
        const auto re = require<std::vector<double>>(j, "real", "initial_state");
        const auto im = get_or<std::vector<double>>(j, "imag", std::vector<double>(re.size(), 0.0));
        if (im.size() != re.size())
            throw ConfigError("initial_state real/imag lengths differ");
        CoefficientInitial c;
        for (std::size_t i = 0; i < re.size(); ++i)
            c.coefficients.emplace_back(re[i], im[i]);
        return c;
    }
    if (type == "gaussian")
    {
        reject_unknown(j, {"type", "center_nm", "width_nm", "wavenumber_per_nm"}, "initial_state");
        GaussianInitial g;
        g.center_nm = require<double>(j, "center_nm", "initial_state");
        g.width_nm = require<double>(j, "width_nm", "initial_state");
        g.wavenumber_per_nm = get_or<double>(j, "wavenumber_per_nm", 0.0);
        return g;
    }
    throw ConfigError("unknown initial_state type '" + type + "'");
}

json initial_to_json(const InitialState& s)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PatternInitial>)
                return {{"type", "sign_pattern"},
                        {"target_well", v.target_well + 1},
                        {"source", v.source == PatternInitial::Source::best ? "best" : "table"}};
            else if constexpr (std::is_same_v<T, SignsInitial>)
                return {{"type", "signs"}, {"signs", v.signs}};
            else if constexpr (std::is_same_v<T, CoefficientInitial>)
            {
                std::vector<double> re, im;
                for (const auto& z : v.coefficients)
                {
                    re.push_back(z.real());
                    im.push_back(z.imag());
                }
                return {{"type", "coefficients"}, {"real", re}, {"imag", im}};
            }
            else
                return {{"type", "gaussian"},
                        {"center_nm", v.center_nm},
                        {"width_nm", v.width_nm},
                        {"wavenumber_per_nm", v.wavenumber_per_nm}};
        },
        s);
}

// ---------------------------------------------------------------------------
// Stage error mapping
// ---------------------------------------------------------------------------

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    using C = ScenarioError::Category;
    try
    {
        return f();
    }
    catch (const ScenarioError&)
    {
        throw;
    }
    catch (const ConvergenceError& e)
    {
        throw ScenarioError(name, C::convergence, e.what());
    }
    catch (const BracketError& e)
    {
        throw ScenarioError(name, C::design, e.what());
    }
    catch (const NonMonotonicError& e)
    {
        throw ScenarioError(name, C::design, e.what());
    }
    catch (const InvalidBasisError& e)
    {
        throw ScenarioError(name, C::design, e.what());
    }
    catch (const CacheError& e)
    {
        throw ScenarioError(name, C::other, e.what());
    }
    catch (const Error& e)
    {
        // Domain, geometry, grid, truncation and config problems are all
        // fixed by editing the scenario.
        throw ScenarioError(name, C::config, e.what());
    }
    catch (const std::exception& e)
    {
        throw ScenarioError(name, C::other, e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV helpers
// ---------------------------------------------------------------------------

class Csv
{
  public:
    Csv(const std::string& artifact, const ScenarioConfig& config)
    {
        out_ += "# qwell " + artifact + " config_fingerprint=" + config.fingerprint_hex() + "\n";
    }
    Csv& comment(const std::string& text)
    {
        out_ += "# " + text + "\n";
        return *this;
    }
    Csv& row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i > 0)
                out_ += ',';
            out_ += cells[i];
        }
        out_ += '\n';
        return *this;
    }
    std::string str() const { return out_; }

  private:
    std::string out_;
};

std::string well_label(std::size_t w) { return "well" + std::to_string(w + 1); }

std::string trace_csv(const CorrelationTrace& trace, const ScenarioConfig& config, const std::string& artifact)
{
    Csv csv(artifact, config);
    csv.row({"tau", "value"});
    for (std::size_t j = 0; j < trace.tau.size(); ++j)
        csv.row({format_double(trace.tau[j]), format_double(trace.values[j])});
    return csv.str();
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct Pipeline
{
    PotentialProfile profile;
    Grid grid;
    std::vector<double> potential;
    std::shared_ptr<const EigenSolution> basis;
};

Pipeline build_pipeline(const ScenarioConfig& config, const RunContext& ctx)
{
    auto profile = stage("geometry", [&] { return build_multiwell(config.geometry); });
    const Grid grid = stage("grid", [&] { return Grid(config.geometry.total_length_nm, config.grid_points); });
    auto potential = sample(profile, grid);
    auto basis = stage("solve", [&] {
        const auto h = assemble(potential, grid, config.units());
        const auto opts = config.solver_options();
        if (ctx.cache_dir)
            return std::make_shared<const EigenSolution>(EigenCache(*ctx.cache_dir).solve(h, config.states(), opts));
        return std::make_shared<const EigenSolution>(lowest_eigenpairs(h, config.states(), opts));
    });
    return {std::move(profile), grid, std::move(potential), std::move(basis)};
}

SignPattern pattern_for(const Pipeline& p, std::size_t well, PatternInitial::Source source)
{
    if (source == PatternInitial::Source::table)
        return table_pattern(p.profile.spec.well_count, well);
    return best_sign_pattern(p.basis, p.profile, well);
}

PatternInitial::Source reference_source(const ScenarioConfig& config)
{
    if (const auto* p = std::get_if<PatternInitial>(&config.initial_state))
        return p->source;
    return PatternInitial::Source::best;
}

SpectralState initial_state(const ScenarioConfig& config, const Pipeline& p)
{
    return stage("initial_state", [&]() -> SpectralState {
        return std::visit(
            [&](const auto& v) -> SpectralState {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, PatternInitial>)
                    return localized_state(p.basis, pattern_for(p, v.target_well, v.source));
                else if constexpr (std::is_same_v<T, SignsInitial>)
                    return localized_state(p.basis, SignPattern{v.signs, 0});
                else if constexpr (std::is_same_v<T, CoefficientInitial>)
                {
                    std::vector<complex> c(p.basis->size(), complex{0.0, 0.0});
                    std::copy(v.coefficients.begin(), v.coefficients.end(), c.begin());
                    return SpectralState::normalized(p.basis, std::move(c));
                }
                else
                    return project(gaussian_packet(p.grid, v.center_nm, v.width_nm, v.wavenumber_per_nm), p.basis);
            },
            config.initial_state);
    });
}

bool has_well_references(const ScenarioConfig& config)
{
    return config.geometry.well_count >= 2 && config.states() >= static_cast<std::size_t>(config.geometry.well_count);
}

std::vector<SpectralState> well_references(const ScenarioConfig& config, const Pipeline& p)
{
    return stage("design", [&] {
        std::vector<SpectralState> refs;
        const auto source = reference_source(config);
        for (int w = 0; w < config.geometry.well_count; ++w)
            refs.push_back(localized_state(p.basis, pattern_for(p, static_cast<std::size_t>(w), source)));
        return refs;
    });
}

std::vector<std::string> well_labels(int n)
{
    std::vector<std::string> out;
    for (int w = 0; w < n; ++w)
        out.push_back(well_label(static_cast<std::size_t>(w)));
    return out;
}

void append(ArtifactBundle& into, ArtifactBundle from)
{
    for (auto& a : from.artifacts)
        into.artifacts.push_back(std::move(a));
}

ArtifactBundle filtered(const ScenarioConfig& config, ArtifactBundle bundle)
{
    if (config.outputs.empty())
        return bundle;
    ArtifactBundle out;
    for (auto& a : bundle.artifacts)
    {
        const auto stem = a.name.substr(0, a.name.rfind('.'));
        for (const auto& want : config.outputs)
        {
            if (want == stem || want == a.name)
            {
                out.artifacts.push_back(std::move(a));
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Workflows on a built pipeline
// ---------------------------------------------------------------------------

ArtifactBundle solve_artifacts(const ScenarioConfig& config, const Pipeline& p)
{
    ArtifactBundle b;
    const auto& basis = *p.basis;
    Csv values("eigenvalues", config);
    values.comment("effective_mass_ratio=" + format_double(config.effective_mass_ratio) +
                   " revival_time_fs=" + format_double(basis_revival_time(basis)));
    values.row({"n", "energy_eV", "residual_eV", "iterations"});
    for (std::size_t n = 0; n < basis.size(); ++n)
    {
        values.row({std::to_string(n + 1), format_double(basis.energies[n]), format_double(basis.residuals[n]),
                    std::to_string(basis.iterations[n])});
    }
    b.artifacts.push_back({"eigenvalues.csv", values.str()});

    Csv states("eigenstates", config);
    std::vector<std::string> header{"x_nm", "potential_eV"};
    for (std::size_t n = 0; n < basis.size(); ++n)
        header.push_back("phi" + std::to_string(n + 1));
    states.row(header);
    for (std::size_t i = 0; i < p.grid.points(); ++i)
    {
        std::vector<std::string> row{format_double(p.grid.x(i)), format_double(p.potential[i])};
        for (std::size_t n = 0; n < basis.size(); ++n)
            row.push_back(format_double(basis.states[n][i]));
        states.row(row);
    }
    b.artifacts.push_back({"eigenstates.csv", states.str()});
    return b;
}

ArtifactBundle design_artifacts(const ScenarioConfig& config, const Pipeline& p)
{
    if (!has_well_references(config))
        throw ScenarioError("design", ScenarioError::Category::config,
                            "design needs at least two wells and num_states >= well_count");
    ArtifactBundle b;
    const int n = config.geometry.well_count;
    const auto labels = well_labels(n);

    Csv patterns("patterns", config);
    patterns.comment("brute-force optimum over all gauge-fixed sign patterns per target well");
    std::vector<std::string> header{"target_well", "signs"};
    for (const auto& l : labels)
        header.push_back("p_" + l);
    header.push_back("localizes");
    patterns.row(header);

    std::vector<Wavefunction> localized;
    for (int w = 0; w < n; ++w)
    {
        const auto well = static_cast<std::size_t>(w);
        const auto pattern = stage("design", [&] { return best_sign_pattern(p.basis, p.profile, well); });
        const auto psi = evolve(localized_state(p.basis, pattern), 0.0);
        const auto probs = well_probabilities(psi, p.profile);
        std::vector<std::string> row{std::to_string(w + 1), pattern.str()};
        bool wins = true;
        for (std::size_t j = 0; j < probs.size(); ++j)
        {
            row.push_back(format_double(probs[j]));
            if (j != well && !(probs[well] > probs[j]))
                wins = false;
        }
        row.push_back(wins ? "true" : "false");
        patterns.row(row);
        localized.push_back(psi);
    }
    b.artifacts.push_back({"patterns.csv", patterns.str()});

    Csv states("localized_states", config);
    std::vector<std::string> sh{"x_nm", "potential_eV"};
    for (const auto& l : labels)
        sh.push_back("psi_" + l);
    states.row(sh);
    for (std::size_t i = 0; i < p.grid.points(); ++i)
    {
        std::vector<std::string> row{format_double(p.grid.x(i)), format_double(p.potential[i])};
        for (const auto& psi : localized)
            row.push_back(format_double(psi[i].real()));
        states.row(row);
    }
    b.artifacts.push_back({"localized_states.csv", states.str()});

    if (n == 6)
    {
        const auto checks = stage("design", [&] { return validate_table(p.basis, p.profile); });
        Csv table("table_check", config);
        table.comment("six-well sign table rows versus brute-force optimum; disagreements are reported, not "
                      "overridden");
        table.row({"target_well", "table_signs", "table_p_target", "table_localizes", "best_signs", "best_p_target",
                   "agrees"});
        for (std::size_t w = 0; w < checks.size(); ++w)
        {
            const auto& c = checks[w];
            table.row({std::to_string(w + 1), c.table.pattern.str(), format_double(c.table.probabilities[w]),
                       c.table_localizes ? "true" : "false", c.brute_force.pattern.str(),
                       format_double(c.brute_force.probabilities[w]), c.agrees ? "true" : "false"});
        }
        b.artifacts.push_back({"table_check.csv", table.str()});
    }
    return b;
}

ArtifactBundle evolve_artifacts(const ScenarioConfig& config, const Pipeline& p)
{
    ArtifactBundle b;
    const auto state = initial_state(config, p);
    std::vector<Wavefunction> snaps;
    for (double tau : config.snapshot_taus)
        snaps.push_back(evolve(state, tau));

    Csv dens("snapshots", config);
    dens.comment("captured_weight=" + format_double(state.captured_weight));
    std::vector<std::string> header{"x_nm", "potential_eV"};
    for (double tau : config.snapshot_taus)
        header.push_back("density_tau=" + format_double(tau));
    dens.row(header);
    for (std::size_t i = 0; i < p.grid.points(); ++i)
    {
        std::vector<std::string> row{format_double(p.grid.x(i)), format_double(p.potential[i])};
        for (const auto& s : snaps)
            row.push_back(format_double(std::norm(s[i])));
        dens.row(row);
    }
    b.artifacts.push_back({"snapshots.csv", dens.str()});

    Csv wells("snapshot_wells", config);
    std::vector<std::string> wh{"tau", "norm"};
    for (const auto& l : well_labels(config.geometry.well_count))
        wh.push_back("p_" + l);
    wells.row(wh);
    for (std::size_t s = 0; s < snaps.size(); ++s)
    {
        std::vector<std::string> row{format_double(config.snapshot_taus[s]), format_double(norm(snaps[s]))};
        for (double v : well_probabilities(snaps[s], p.profile))
            row.push_back(format_double(v));
        wells.row(row);
    }
    b.artifacts.push_back({"snapshot_wells.csv", wells.str()});
    return b;
}

struct CorrelationResult
{
    std::vector<CorrelationTrace> traces;  // autocorrelation first, then wells
    std::vector<HopReport> hops;
};

CorrelationResult correlate(const ScenarioConfig& config, const Pipeline& p)
{
    CorrelationResult r;
    const auto state = initial_state(config, p);
    const auto axis = config.tau_axis();
    r.traces.push_back(autocorrelation(state, axis));
    if (has_well_references(config))
    {
        const auto refs = well_references(config, p);
        auto traces = well_correlation(refs, state, axis, well_labels(config.geometry.well_count));
        for (auto& t : traces)
            r.traces.push_back(std::move(t));
    }
    for (const auto& t : r.traces)
        r.hops.push_back(detect_hops(t, config.hop_threshold));
    return r;
}

ArtifactBundle correlate_artifacts(const ScenarioConfig& config, const Pipeline& p)
{
    ArtifactBundle b;
    const auto r = stage("correlate", [&] { return correlate(config, p); });
    const double trev = basis_revival_time(*p.basis);
    for (const auto& t : r.traces)
    {
        const std::string name = t.reference_label == "autocorrelation" ? "autocorrelation" : "trace_" + t.reference_label;
        b.artifacts.push_back({name + ".csv", trace_csv(t, config, name)});
    }

    Csv hops("hops", config);
    hops.comment("peak threshold=" + format_double(config.hop_threshold) +
                 " is a localization convention, not a physical constant");
    hops.row({"reference", "tau", "value"});
    Csv summary("hop_summary", config);
    summary.comment("peak threshold=" + format_double(config.hop_threshold) +
                    " is a localization convention, not a physical constant");
    summary.comment("revival_time_fs=" + format_double(trev));
    if (config.geometry.well_count == 2 && p.basis->size() >= 2)
        summary.comment("two_state_hop_period_fs=" + format_double(two_well_hop_period(*p.basis)));
    summary.row({"reference", "peaks", "first_peak_tau", "first_peak_fs", "period_tau", "period_fs"});
    for (std::size_t k = 0; k < r.traces.size(); ++k)
    {
        const auto& label = r.traces[k].reference_label;
        const auto& rep = r.hops[k];
        for (const auto& e : rep.peaks)
            hops.row({label, format_double(e.tau), format_double(e.value)});
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double first = rep.peaks.empty() ? nan : rep.peaks.front().tau;
        const double period = rep.period_tau.value_or(nan);
        summary.row({label, std::to_string(rep.peaks.size()), format_double(first), format_double(first * trev),
                     format_double(period), format_double(period * trev)});
    }
    b.artifacts.push_back({"hops.csv", hops.str()});
    b.artifacts.push_back({"hop_summary.csv", summary.str()});
    return b;
}

struct SweepRow
{
    double barrier_height;
    std::vector<double> energies;
    double first_hop_fs = std::numeric_limits<double>::quiet_NaN();
    double period_fs = std::numeric_limits<double>::quiet_NaN();
    double two_state_fs = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

SweepRow sweep_row(const ScenarioConfig& base, double height, const RunContext& ctx)
{
    SweepRow row{height, {}};
    try
    {
        ScenarioConfig cfg = base;
        cfg.geometry.barrier_height_eV = height;
        const auto p = build_pipeline(cfg, ctx);
        row.energies = p.basis->energies;
        const double trev = basis_revival_time(*p.basis);
        const auto r = stage("correlate", [&] { return correlate(cfg, p); });
        // The neighbour-well trace when wells exist, otherwise the autocorrelation.
        const auto& rep = r.hops.size() > 1 ? r.hops[2 % r.hops.size()] : r.hops[0];
        if (!rep.peaks.empty())
            row.first_hop_fs = rep.peaks.front().tau * trev;
        if (rep.period_tau)
            row.period_fs = *rep.period_tau * trev;
        if (cfg.geometry.well_count == 2)
            row.two_state_fs = two_well_hop_period(*p.basis);
        if (rep.peaks.empty())
            row.status = "no_hops";
    }
    catch (const ScenarioError& e)
    {
        row.status = "failed:" + e.stage();
    }
    return row;
}

std::string monotonic_flag(const std::vector<SweepRow>& rows, double SweepRow::*column, const char* name)
{
    for (const auto& r : rows)
    {
        if (!std::isfinite(r.*column))
            return "";
    }
    bool increasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        if (!(rows[i].*column > rows[i - 1].*column))
            increasing = false;
    }
    return std::string("monotonic_increasing(") + name + ")=" + (increasing ? "true" : "false");
}

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioConfig
// ---------------------------------------------------------------------------

std::size_t ScenarioConfig::states() const
{
    return num_states == 0 ? static_cast<std::size_t>(std::max(geometry.well_count, 1)) : num_states;
}

UnitSystem ScenarioConfig::units() const
{
    UnitSystem u;
    u.effective_mass_ratio = effective_mass_ratio;
    return u;
}

TauAxis ScenarioConfig::tau_axis() const
{
    return {tau_max, tau_samples};
}

SolverOptions ScenarioConfig::solver_options() const
{
    SolverOptions o;
    o.seed = seed;
    return o;
}

void ScenarioConfig::validate() const
{
    try
    {
        geometry.validate();
        units().validate();
        tau_axis().validate();
    }
    catch (const Error& e)
    {
        throw ConfigError(e.what());
    }
    if (grid_points < 3)
        throw ConfigError("grid_points must be >= 3");
    if (states() < 1 || states() > grid_points)
        throw ConfigError("num_states must be in [1, grid_points]");
    if (!(hop_threshold > 0.0 && hop_threshold < 1.0))
        throw ConfigError("hop_threshold must lie in (0, 1)");
    for (double t : snapshot_taus)
    {
        if (!(t >= 0.0))
            throw ConfigError("snapshot_taus must be non-negative");
    }
    const auto n = static_cast<std::size_t>(geometry.well_count);
    if (const auto* p = std::get_if<PatternInitial>(&initial_state))
    {
        if (p->target_well >= n)
            throw ConfigError("initial_state.target_well exceeds well_count");
        if (states() < n)
            throw ConfigError("num_states must be >= well_count for a sign-pattern initial state");
        if (p->source == PatternInitial::Source::table && n != 6)
            throw ConfigError("source 'table' is only defined for six wells");
    }
    if (const auto* s = std::get_if<SignsInitial>(&initial_state))
    {
        if (s->signs.empty() || s->signs.size() > states())
            throw ConfigError("initial_state.signs length must be in [1, num_states]");
        try
        {
            SignPattern{s->signs, 0}.validate();
        }
        catch (const Error& e)
        {
            throw ConfigError(std::string("initial_state.signs: ") + e.what());
        }
    }
    if (const auto* c = std::get_if<CoefficientInitial>(&initial_state))
    {
        if (c->coefficients.empty() || c->coefficients.size() > states())
            throw ConfigError("initial_state coefficient count must be in [1, num_states]");
    }
    if (const auto* g = std::get_if<GaussianInitial>(&initial_state))
    {
        if (!(g->width_nm > 0.0))
            throw ConfigError("initial_state.width_nm must be positive");
    }
    if (sweep)
    {
        if (sweep->barrier_heights_eV.empty())
            throw ConfigError("sweep.barrier_heights_eV needs at least one value");
        for (double v : sweep->barrier_heights_eV)
        {
            if (!(v >= 0.0))
                throw ConfigError("sweep barrier heights must be >= 0");
        }
    }
    if (inverse)
    {
        if (geometry.well_count != 2)
            throw ConfigError("inverse design needs well_count = 2");
        if (!(inverse->target_period_fs > 0.0))
            throw ConfigError("inverse.target_period_fs must be positive");
        if (!(inverse->bracket_lo_eV >= 0.0 && inverse->bracket_hi_eV > inverse->bracket_lo_eV))
            throw ConfigError("inverse.bracket_eV must satisfy 0 <= lo < hi");
        if (!(inverse->rel_tol > 0.0))
            throw ConfigError("inverse.rel_tol must be positive");
    }
}

std::uint64_t ScenarioConfig::fingerprint() const
{
    json j;
    j["geometry"] = {{"length_nm", geometry.total_length_nm},
                     {"well_count", geometry.well_count},
                     {"barrier_width_nm", geometry.barrier_width_nm},
                     {"barrier_height_eV", geometry.barrier_height_eV},
                     {"well_depth_eV", geometry.well_depth_eV}};
    j["grid_points"] = grid_points;
    j["num_states"] = states();
    j["effective_mass_ratio"] = effective_mass_ratio;
    j["tau_max"] = tau_max;
    j["tau_samples"] = tau_samples;
    j["hop_threshold"] = hop_threshold;
    j["seed"] = seed;
    j["initial_state"] = initial_to_json(initial_state);
    j["snapshot_taus"] = snapshot_taus;
    if (sweep)
        j["sweep"] = {{"barrier_heights_eV", sweep->barrier_heights_eV}};
    if (inverse)
        j["inverse"] = {{"target_period_fs", inverse->target_period_fs},
                        {"bracket_eV", {inverse->bracket_lo_eV, inverse->bracket_hi_eV}},
                        {"rel_tol", inverse->rel_tol}};
    Fnv1a h;
    h.str("qwell.config.v1").str(j.dump());
    return h.value();
}

std::string ScenarioConfig::fingerprint_hex() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint()));
    return buf;
}

ScenarioConfig parse_config(const std::string& json_text)
{
    json j;
    try
    {
        j = json::parse(json_text);
    }
    catch (const json::exception& e)
    {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"geometry", "grid_points", "num_states", "effective_mass_ratio", "tau_max", "tau_samples",
                    "hop_threshold", "seed", "initial_state", "snapshot_taus", "sweep", "inverse", "outputs"},
                   "config");

    ScenarioConfig c;
    const auto& g = j.contains("geometry") ? j.at("geometry") : throw ConfigError("missing 'geometry'");
    if (!g.is_object())
        throw ConfigError("geometry must be an object");
    reject_unknown(g, {"length_nm", "well_count", "barrier_width_nm", "barrier_height_eV", "well_depth_eV"},
                   "geometry");
    c.geometry.total_length_nm = require<double>(g, "length_nm", "geometry");
    c.geometry.well_count = require<int>(g, "well_count", "geometry");
    c.geometry.barrier_width_nm = get_or<double>(g, "barrier_width_nm", 0.0);
    c.geometry.barrier_height_eV = get_or<double>(g, "barrier_height_eV", 0.0);
    c.geometry.well_depth_eV = get_or<double>(g, "well_depth_eV", 0.0);

    const auto grid_points = get_or<long long>(j, "grid_points", 2000);
    const auto num_states = get_or<long long>(j, "num_states", 0);
    const auto tau_samples = get_or<long long>(j, "tau_samples", 2048);
    if (grid_points < 0 || num_states < 0 || tau_samples < 0)
        throw ConfigError("counts must be non-negative");
    c.grid_points = static_cast<std::size_t>(grid_points);
    c.num_states = static_cast<std::size_t>(num_states);
    c.tau_samples = static_cast<std::size_t>(tau_samples);
    c.effective_mass_ratio = get_or<double>(j, "effective_mass_ratio", 1.0);
    c.tau_max = get_or<double>(j, "tau_max", 2.0);
    c.hop_threshold = get_or<double>(j, "hop_threshold", 0.9);
    c.seed = get_or<std::uint64_t>(j, "seed", kDefaultSeed);
    if (j.contains("initial_state"))
        c.initial_state = parse_initial(j.at("initial_state"));
    c.snapshot_taus = get_or<std::vector<double>>(j, "snapshot_taus", c.snapshot_taus);
    c.outputs = get_or<std::vector<std::string>>(j, "outputs", {});
    if (j.contains("sweep"))
    {
        const auto& s = j.at("sweep");
        reject_unknown(s, {"barrier_heights_eV"}, "sweep");
        c.sweep = SweepSettings{require<std::vector<double>>(s, "barrier_heights_eV", "sweep")};
    }
    if (j.contains("inverse"))
    {
        const auto& s = j.at("inverse");
        reject_unknown(s, {"target_period_fs", "bracket_eV", "rel_tol"}, "inverse");
        InverseSettings inv;
        inv.target_period_fs = require<double>(s, "target_period_fs", "inverse");
        const auto bracket = require<std::vector<double>>(s, "bracket_eV", "inverse");
        if (bracket.size() != 2)
            throw ConfigError("inverse.bracket_eV must have two entries");
        inv.bracket_lo_eV = bracket[0];
        inv.bracket_hi_eV = bracket[1];
        inv.rel_tol = get_or<double>(s, "rel_tol", 1e-3);
        c.inverse = inv;
    }
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Bundles and errors
// ---------------------------------------------------------------------------

const Artifact* ArtifactBundle::find(const std::string& name) const
{
    for (const auto& a : artifacts)
    {
        if (a.name == name)
            return &a;
    }
    return nullptr;
}

void ArtifactBundle::write(const std::filesystem::path& dir) const
{
    std::filesystem::create_directories(dir);
    for (const auto& a : artifacts)
    {
        std::ofstream out(dir / a.name, std::ios::binary | std::ios::trunc);
        out << a.content;
        if (!out)
            throw Error("failed to write " + (dir / a.name).string());
    }
}

ScenarioError::ScenarioError(std::string stage, Category category, const std::string& what)
    : Error("stage '" + stage + "': " + what), stage_(std::move(stage)), category_(category)
{
}

int exit_code_for(ScenarioError::Category category)
{
    switch (category)
    {
        case ScenarioError::Category::config:
            return 2;
        case ScenarioError::Category::convergence:
            return 3;
        case ScenarioError::Category::design:
            return 4;
        case ScenarioError::Category::other:
            break;
    }
    return 1;
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Workflows
// ---------------------------------------------------------------------------

ArtifactBundle run_solve(const ScenarioConfig& config, const RunContext& ctx)
{
    const auto p = build_pipeline(config, ctx);
    return filtered(config, solve_artifacts(config, p));
}

ArtifactBundle run_design(const ScenarioConfig& config, const RunContext& ctx)
{
    const auto p = build_pipeline(config, ctx);
    return filtered(config, design_artifacts(config, p));
}

ArtifactBundle run_evolve(const ScenarioConfig& config, const RunContext& ctx)
{
    const auto p = build_pipeline(config, ctx);
    return filtered(config, evolve_artifacts(config, p));
}

ArtifactBundle run_correlate(const ScenarioConfig& config, const RunContext& ctx)
{
    const auto p = build_pipeline(config, ctx);
    return filtered(config, correlate_artifacts(config, p));
}

ArtifactBundle run_sweep(const ScenarioConfig& config, const RunContext& ctx)
{
    if (!config.sweep)
        throw ScenarioError("sweep", ScenarioError::Category::config, "config has no 'sweep' section");
    const auto& values = config.sweep->barrier_heights_eV;
    std::vector<std::future<SweepRow>> jobs;
    for (double v : values)
        jobs.push_back(std::async(std::launch::async, [&config, &ctx, v] { return sweep_row(config, v, ctx); }));
    std::vector<SweepRow> rows;
    for (auto& j : jobs)
        rows.push_back(j.get());

    Csv csv("sweep", config);
    csv.comment("hop columns come from peaks of the " +
                std::string(config.geometry.well_count >= 2 ? "well2 correlation trace" : "autocorrelation") +
                " above threshold " + format_double(config.hop_threshold));
    if (rows.size() >= 2)
    {
        auto flag = monotonic_flag(rows, &SweepRow::period_fs, "hop_period_fs");
        if (flag.empty())
            flag = monotonic_flag(rows, &SweepRow::first_hop_fs, "first_hop_fs");
        csv.comment(flag.empty() ? "monotonic_increasing=unknown" : flag);
    }
    std::vector<std::string> header{"barrier_height_eV"};
    for (std::size_t n = 0; n < config.states(); ++n)
        header.push_back("E" + std::to_string(n + 1) + "_eV");
    for (const char* h : {"first_hop_fs", "hop_period_fs", "two_state_period_fs", "status"})
        header.push_back(h);
    csv.row(header);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows)
    {
        std::vector<std::string> row{format_double(r.barrier_height)};
        for (std::size_t n = 0; n < config.states(); ++n)
            row.push_back(format_double(n < r.energies.size() ? r.energies[n] : nan));
        row.push_back(format_double(r.first_hop_fs));
        row.push_back(format_double(r.period_fs));
        row.push_back(format_double(r.two_state_fs));
        row.push_back(r.status);
        csv.row(row);
    }
    ArtifactBundle b;
    b.artifacts.push_back({"sweep.csv", csv.str()});
    return filtered(config, b);
}

ArtifactBundle run_inverse(const ScenarioConfig& config, const RunContext&)
{
    if (!config.inverse)
        throw ScenarioError("inverse", ScenarioError::Category::config, "config has no 'inverse' section");
    const auto& inv = *config.inverse;
    DesignOptions opts;
    opts.grid_points = config.grid_points;
    opts.units = config.units();
    opts.solver = config.solver_options();
    opts.rel_tol = inv.rel_tol;
    const auto result = stage("inverse", [&] {
        return inverse_barrier_height(config.geometry, inv.target_period_fs, inv.bracket_lo_eV, inv.bracket_hi_eV,
                                      opts);
    });
    Csv csv("inverse", config);
    csv.comment("bracket_eV=[" + format_double(inv.bracket_lo_eV) + "," + format_double(inv.bracket_hi_eV) +
                "] rel_tol=" + format_double(inv.rel_tol));
    csv.row({"target_period_fs", "barrier_height_eV", "achieved_period_fs", "iterations"});
    csv.row({format_double(inv.target_period_fs), format_double(result.barrier_height_eV),
             format_double(result.period_fs), std::to_string(result.iterations)});
    ArtifactBundle b;
    b.artifacts.push_back({"inverse.csv", csv.str()});
    return filtered(config, b);
}

ArtifactBundle run_scenario(const ScenarioConfig& config, const RunContext& ctx)
{
    const auto p = build_pipeline(config, ctx);
    ArtifactBundle b = solve_artifacts(config, p);
    if (has_well_references(config))
        append(b, design_artifacts(config, p));
    append(b, evolve_artifacts(config, p));
    append(b, correlate_artifacts(config, p));
    return filtered(config, b);
}

}  // namespace qwell
