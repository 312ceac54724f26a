#ifndef FLOWSIM_HARNESS_HPP
#define FLOWSIM_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowsim/flow.hpp"
#include "flowsim/io.hpp"

namespace flowsim {

/// Aggregate over a batch of trial returns. std_error is the sample standard
/// deviation (n - 1 denominator) divided by sqrt(n); zero when n < 2.
struct TrialStats {
    std::int64_t n_trials = 0;
    double mean_return = 0.0;
    double std_error = 0.0;
};

TrialStats compute_stats(const std::vector<double>& returns);

/// Lifetime return of a trajectory: zero unless the goal was reached by the
/// horizon, otherwise the sum of occupied levels through the goal time plus
/// level_max for every remaining step up to the horizon.
double compute_return(const Trajectory& trajectory, std::int64_t horizon, double level_max);

/// Builds the meta policy for one trial; may draw from the trial's stream
/// (probe agents do) before the episode consumes the rest of it.
using PolicyFactory = std::function<std::unique_ptr<MetaPolicy>(RandomSource&)>;

struct RunResult {
    TrialStats stats;
    std::vector<double> returns;
};

/// Runs n independent episodes; trial i uses the stream derived from
/// (seed, stream_tag, i).
RunResult run_trials(const EnvironmentSpec& spec, const PolicyFactory& factory, std::int64_t n,
                     std::uint64_t seed, std::uint64_t stream_tag = 0);

/// Evenly tabulated closed interval of baseline slopes.
struct AlphaSweep {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

/// Grid point j of the sweep: min + j * (max - min) / (count - 1).
double alpha_at(const AlphaSweep& sweep, int j);

struct SweepResult {
    std::vector<double> alphas;
    std::vector<TrialStats> stats;
    std::vector<std::vector<double>> returns;
    std::size_t best_index = 0; // argmax mean return, lowest alpha on ties
};

SweepResult sweep_alpha(const EnvironmentSpec& spec, const AlphaSweep& sweep, std::int64_t trials,
                        std::uint64_t seed);

struct MiningParams {
    std::int64_t probes = 10000;
    double rho = 0.001;
    double bin_width = 1.0;
    ProbeSlopes slopes;
    bool dump_log = false; // also write the raw ability log for audit
};

/// Generates probe agents, runs their episodes, records everything into an
/// ability log and mines it. When out_dir is given, writes profile.csv and
/// the mined-versus-actual comparison CSV there.
/// Throws std::runtime_error when no bin has a surviving sample.
ComplexityProfile mine_pipeline(const EnvironmentSpec& spec, const MiningParams& params,
                                std::uint64_t seed,
                                const std::optional<std::filesystem::path>& out_dir = std::nullopt);

struct CompareResult {
    SweepResult sweep;
    TrialStats flow_stats;
    std::vector<double> flow_returns;
};

/// Baseline sweep plus flow-agent batch on a mined profile; writes
/// results.csv and per-trial return CSVs into out_dir when given.
CompareResult compare(const EnvironmentSpec& spec, const std::string& env_name,
                      const ComplexityProfile& profile, const FlowConfig& flow_config,
                      const AlphaSweep& sweep, std::int64_t trials, std::uint64_t seed,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Runs a single episode and writes its trajectory CSV (plus the actual
/// complexity curve for overlay) into out_dir. Returns the trajectory.
Trajectory emit_trace(const EnvironmentSpec& spec, const MetaPolicy& policy, std::uint64_t seed,
                      const std::filesystem::path& out_dir, const std::string& name);

/// Full experiment configuration with per-environment defaults.
struct ExperimentConfig {
    std::string env_name = "sqrt";
    EnvironmentSpec env;
    AlphaSweep alpha_sweep;
    ProbeSlopes probe_slopes;
    std::int64_t probes = 10000;
    double rho = 0.001;
    double bin_width = 1.0;
    std::int64_t trials = 1000;
    std::uint64_t seed = 42;
    FlowConfig flow;

    void validate() const;
};

/// Built-in environments: "sqrt" (c = sqrt(L) on [0, 200], p-dagger 1e-3)
/// and "quadratic" (c = L^2 on [0, 40], p-dagger 1e-4), with their baseline
/// sweep intervals and probe slope ranges.
ExperimentConfig preset_config(const std::string& env_name);

/// Applies `key = value` settings (e.g. from a config file) on top of a
/// config; unknown keys or unparsable values raise std::invalid_argument.
/// The `env` key switches presets and must come first if present.
ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);

} // namespace flowsim

#endif
