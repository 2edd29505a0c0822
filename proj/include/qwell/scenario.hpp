#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qwell/cache.hpp"
#include "qwell/design.hpp"
#include "qwell/errors.hpp"
#include "qwell/dynamics.hpp"
#include "qwell/potential.hpp"
#include "qwell/spectral.hpp"

namespace qwell {

/// Sign-pattern initial state localized in `target_well` (0-based).
struct PatternInitial
{
    enum class Source
    {
        best,   // brute-force optimum
        table,  // six-well sign table
    };
    std::size_t target_well = 0;
    Source source = Source::best;
};

struct SignsInitial
{
    std::vector<int> signs;
};

struct CoefficientInitial
{
    std::vector<complex> coefficients;
};

struct GaussianInitial
{
    double center_nm = 25.0;
    double width_nm = 10.0;
    double wavenumber_per_nm = 0.0;
};

using InitialState = std::variant<PatternInitial, SignsInitial, CoefficientInitial, GaussianInitial>;

struct SweepSettings
{
    std::vector<double> barrier_heights_eV;
};

struct InverseSettings
{
    double target_period_fs = 0.0;
    double bracket_lo_eV = 0.0;
    double bracket_hi_eV = 0.0;
    double rel_tol = 1e-3;
};

struct ScenarioConfig
{
    MultiWellSpec geometry;
    std::size_t grid_points = 2000;
    std::size_t num_states = 0;  // 0 means well_count
    double effective_mass_ratio = 1.0;
    double tau_max = 2.0;
    std::size_t tau_samples = 2048;
    double hop_threshold = 0.9;
    std::uint64_t seed = kDefaultSeed;
    InitialState initial_state = PatternInitial{};
    std::vector<double> snapshot_taus{0.0, 0.1, 0.25, 1.0};
    std::optional<SweepSettings> sweep;
    std::optional<InverseSettings> inverse;
    std::vector<std::string> outputs;

    std::size_t states() const;
    UnitSystem units() const;
    TauAxis tau_axis() const;
    SolverOptions solver_options() const;

    /// Throws ConfigError on any inconsistency.
    void validate() const;

    /// Hash of every physics-affecting field (everything except `outputs`).
    std::uint64_t fingerprint() const;
    std::string fingerprint_hex() const;
};

/// Parses a JSON document; unknown keys are rejected.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Named text file produced by a workflow.
struct Artifact
{
    std::string name;
    std::string content;
};

struct ArtifactBundle
{
    std::vector<Artifact> artifacts;

    const Artifact* find(const std::string& name) const;
    /// Writes every artifact under `dir` (created if missing).
    void write(const std::filesystem::path& dir) const;
};

/// Error raised by a workflow with the failing stage attached.
class ScenarioError : public Error
{
  public:
    enum class Category
    {
        config,
        convergence,
        design,
        other,
    };
    ScenarioError(std::string stage, Category category, const std::string& what);
    const std::string& stage() const { return stage_; }
    Category category() const { return category_; }

  private:
    std::string stage_;
    Category category_;
};

/// Process exit code for an error category: config 2, convergence 3, design 4.
int exit_code_for(ScenarioError::Category category);

struct RunContext
{
    /// Eigen cache directory; empty disables caching.
    std::optional<std::filesystem::path> cache_dir;
};

ArtifactBundle run_solve(const ScenarioConfig& config, const RunContext& ctx = {});
ArtifactBundle run_design(const ScenarioConfig& config, const RunContext& ctx = {});
ArtifactBundle run_evolve(const ScenarioConfig& config, const RunContext& ctx = {});
ArtifactBundle run_correlate(const ScenarioConfig& config, const RunContext& ctx = {});
ArtifactBundle run_sweep(const ScenarioConfig& config, const RunContext& ctx = {});
ArtifactBundle run_inverse(const ScenarioConfig& config, const RunContext& ctx = {});

/// Solve, design (multi-well only), evolve and correlate in one bundle.
ArtifactBundle run_scenario(const ScenarioConfig& config, const RunContext& ctx = {});

/// Decimal rendering with 17 significant digits, locale independent.
std::string format_double(double value);

}  // namespace qwell
