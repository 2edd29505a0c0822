// Command-line front end for the multi-well scenario workflows.
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qwell/errors.hpp"
#include "qwell/scenario.hpp"

namespace {

constexpr const char* kDefaultCacheDir = ".qwell_cache";
constexpr const char* kCacheEnv = "QWELL_CACHE_DIR";

using Workflow = std::function<qwell::ArtifactBundle(const qwell::ScenarioConfig&, const qwell::RunContext&)>;

struct CommonOptions
{
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::string cache;
    bool no_cache = false;
};

std::optional<std::filesystem::path> resolve_cache(const CommonOptions& opts)
{
    if (opts.no_cache)
        return std::nullopt;
    if (!opts.cache.empty())
        return std::filesystem::path(opts.cache);
    if (const char* env = std::getenv(kCacheEnv); env != nullptr && *env != '\0')
        return std::filesystem::path(env);
    return std::filesystem::path(kDefaultCacheDir);
}

int run(const CommonOptions& opts, const Workflow& workflow)
{
    try
    {
        auto config = qwell::load_config(opts.config);
        if (opts.seed)
            config.seed = *opts.seed;
        qwell::RunContext ctx;
        ctx.cache_dir = resolve_cache(opts);
        const auto bundle = workflow(config, ctx);
        bundle.write(opts.out);
        for (const auto& a : bundle.artifacts)
            std::cout << (std::filesystem::path(opts.out) / a.name).string() << '\n';
        return 0;
    }
    catch (const qwell::ScenarioError& e)
    {
        std::cerr << "qwell: " << e.what() << '\n';
        return qwell::exit_code_for(e.category());
    }
    catch (const qwell::ConfigError& e)
    {
        std::cerr << "qwell: config: " << e.what() << '\n';
        return qwell::exit_code_for(qwell::ScenarioError::Category::config);
    }
    catch (const std::exception& e)
    {
        std::cerr << "qwell: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-well quantum dynamics: eigenstates, localized states and hopping"};
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, Workflow>> commands{
        {"solve", {"Lowest eigenpairs of the configured profile", qwell::run_solve}},
        {"design", {"Sign patterns and well probabilities", qwell::run_design}},
        {"evolve", {"Probability snapshots at the listed tau values", qwell::run_evolve}},
        {"correlate", {"Autocorrelation, well traces and hop report", qwell::run_correlate}},
        {"sweep", {"Barrier-height sweep of energies and hop periods", qwell::run_sweep}},
        {"inverse", {"Barrier height for a target two-well hop period", qwell::run_inverse}},
        {"run", {"Solve, design, evolve and correlate in one pass", qwell::run_scenario}},
    };

    CommonOptions opts;
    std::map<CLI::App*, const Workflow*> dispatch;
    for (const auto& [name, entry] : commands)
    {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", opts.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", opts.seed, "Seed for inverse-iteration starting vectors");
        auto* cache = sub->add_option("--cache", opts.cache, "Eigen cache directory (overrides $QWELL_CACHE_DIR)");
        sub->add_flag("--no-cache", opts.no_cache, "Disable the eigen cache")->excludes(cache);
        dispatch[sub] = &entry.second;
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& [sub, workflow] : dispatch)
    {
        if (sub->parsed())
            return run(opts, *workflow);
    }
    return 1;
}
