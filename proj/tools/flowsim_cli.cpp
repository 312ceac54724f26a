// Command line front end: mine complexity profiles from probe agents, sweep
// baseline slopes, run single agent families, compare flow against the best
// baseline, and dump single-episode traces as CSV.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flowsim/harness.hpp"

namespace fs = std::filesystem;
using namespace flowsim;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::map<std::string, std::string> overrides;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (key = value lines)");
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();

    // Flag overrides share the config-file key names and are applied on top
    // of the file.
    auto forward = [cmd, &opts](const std::string& flag, const std::string& key,
                                const std::string& help) {
        cmd->add_option_function<std::string>(
               flag, [&opts, key](const std::string& v) { opts.overrides[key] = v; }, help)
            ->expected(1);
    };
    forward("--env", "env", "Environment preset: sqrt or quadratic");
    forward("--seed", "seed", "Master random seed");
    forward("--probes", "probes", "Number of probe agents for mining");
    forward("--rho", "rho", "Outlier trim fraction per bin (e.g. 0.001)");
    forward("--trials", "trials", "Trials per agent setting");
    forward("--alpha-min", "alpha_min", "Baseline sweep lower bound");
    forward("--alpha-max", "alpha_max", "Baseline sweep upper bound");
    forward("--alpha-count", "alpha_count", "Number of sweep points");
    forward("--tmax", "tmax", "Horizon (number of rewarded steps)");
    forward("--pdagger", "pdagger", "Ambient death probability");
    forward("--bin-width", "bin_width", "Level bin width for mining");
    forward("--slope-min", "slope_min", "Probe slope range lower bound");
    forward("--slope-max", "slope_max", "Probe slope range upper bound");
    forward("--slope-dist", "slope_dist", "Probe slope distribution: uniform or loguniform");
    for (int seg = 0; seg < 3; ++seg) {
        const std::string n = std::to_string(seg);
        forward("--slope" + n + "-min", "slope" + n + "_min",
                "Probe segment " + n + " slope lower bound");
        forward("--slope" + n + "-max", "slope" + n + "_max",
                "Probe segment " + n + " slope upper bound");
    }
    forward("--xi", "xi", "Flow division guard");
    forward("--search-step", "search_step", "Flow level-search grid spacing");
    forward("--radius", "radius", "Flow search radius (or 'inf')");
}

ExperimentConfig build_config(const CommonOpts& opts) {
    std::map<std::string, std::string> kv;
    if (!opts.config_path.empty()) {
        kv = parse_config_file(opts.config_path);
    }
    for (const auto& [k, v] : opts.overrides) {
        kv[k] = v;
    }
    return config_from_map(kv);
}

void print_stats(const std::string& label, const TrialStats& s) {
    std::printf("%-16s trials=%lld mean_return=%.6g std_error=%.6g\n", label.c_str(),
                static_cast<long long>(s.n_trials), s.mean_return, s.std_error);
}

ComplexityProfile obtain_profile(const ExperimentConfig& cfg, const std::string& profile_path,
                                 const std::optional<fs::path>& out_dir) {
    if (!profile_path.empty()) {
        return read_profile_csv(profile_path);
    }
    MiningParams params{cfg.probes, cfg.rho, cfg.bin_width, cfg.probe_slopes};
    return mine_pipeline(cfg.env, params, cfg.seed, out_dir);
}

int cmd_mine(const CommonOpts& opts, bool dump_log) {
    const ExperimentConfig cfg = build_config(opts);
    MiningParams params{cfg.probes, cfg.rho, cfg.bin_width, cfg.probe_slopes, dump_log};
    const ComplexityProfile profile =
        mine_pipeline(cfg.env, params, cfg.seed, fs::path(opts.out_dir));
    const auto total_bins =
        static_cast<std::size_t>(std::floor(cfg.env.level_max / cfg.bin_width)) + 1;
    std::printf("mined %zu/%zu bins, mean abs deviation from actual curve: %.6g\n",
                profile.node_count(), total_bins, profile_error(profile, cfg.env));
    std::printf("wrote %s/profile.csv and %s/mined_vs_actual.csv\n", opts.out_dir.c_str(),
                opts.out_dir.c_str());
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    const ExperimentConfig cfg = build_config(opts);
    const SweepResult sweep = sweep_alpha(cfg.env, cfg.alpha_sweep, cfg.trials, cfg.seed);
    std::vector<ResultRow> rows;
    for (std::size_t j = 0; j < sweep.alphas.size(); ++j) {
        rows.push_back({cfg.env_name, "baseline", sweep.alphas[j], sweep.stats[j].n_trials,
                        sweep.stats[j].mean_return, sweep.stats[j].std_error});
        std::printf("alpha=%-8.4g mean_return=%.6g std_error=%.6g\n", sweep.alphas[j],
                    sweep.stats[j].mean_return, sweep.stats[j].std_error);
    }
    fs::create_directories(opts.out_dir);
    write_results_csv(rows, fs::path(opts.out_dir) / "results.csv");
    std::printf("best alpha = %.6g (mean_return %.6g)\n", sweep.alphas[sweep.best_index],
                sweep.stats[sweep.best_index].mean_return);
    return 0;
}

int cmd_run(const CommonOpts& opts, const std::string& agent, double alpha,
            const std::string& profile_path) {
    const ExperimentConfig cfg = build_config(opts);
    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);

    PolicyFactory factory;
    std::optional<ComplexityProfile> profile;
    if (agent == "baseline") {
        factory = [&cfg, alpha](RandomSource&) -> std::unique_ptr<MetaPolicy> {
            return std::make_unique<BaselineMetaPolicy>(BaselinePolicy{alpha}, cfg.env.level_max);
        };
    } else if (agent == "flow") {
        profile = obtain_profile(cfg, profile_path, out_dir);
        factory = [&cfg, &profile](RandomSource&) -> std::unique_ptr<MetaPolicy> {
            return std::make_unique<FlowMetaPolicy>(*profile, cfg.flow, cfg.env.level_max);
        };
    } else if (agent == "probe") {
        factory = [&cfg](RandomSource& rng) -> std::unique_ptr<MetaPolicy> {
            return std::make_unique<ProbeMetaPolicy>(
                make_probe(rng, cfg.env.level_max, cfg.probe_slopes), cfg.env.level_max);
        };
    } else {
        throw std::invalid_argument("run: unknown agent '" + agent + "'");
    }

    const RunResult run = run_trials(cfg.env, factory, cfg.trials, cfg.seed);
    print_stats(agent, run.stats);
    write_returns_csv(run.returns, out_dir / "returns.csv");
    std::vector<ResultRow> rows{{cfg.env_name, agent,
                                 agent == "baseline" ? std::optional<double>(alpha) : std::nullopt,
                                 run.stats.n_trials, run.stats.mean_return, run.stats.std_error}};
    write_results_csv(rows, out_dir / "results.csv");
    return 0;
}

int cmd_compare(const CommonOpts& opts, const std::string& profile_path) {
    const ExperimentConfig cfg = build_config(opts);
    const fs::path out_dir(opts.out_dir);
    const ComplexityProfile profile = obtain_profile(cfg, profile_path, out_dir);
    const CompareResult result = compare(cfg.env, cfg.env_name, profile, cfg.flow,
                                         cfg.alpha_sweep, cfg.trials, cfg.seed, out_dir);
    const auto& best = result.sweep.stats[result.sweep.best_index];
    std::printf("env=%s\n", cfg.env_name.c_str());
    std::printf("baseline_best   alpha=%.6g mean_return=%.6g std_error=%.6g\n",
                result.sweep.alphas[result.sweep.best_index], best.mean_return, best.std_error);
    print_stats("flow", result.flow_stats);
    std::printf("wrote %s/results.csv\n", opts.out_dir.c_str());
    return 0;
}

int cmd_trace(const CommonOpts& opts, const std::string& agent, double alpha,
              const std::string& profile_path) {
    const ExperimentConfig cfg = build_config(opts);
    const fs::path out_dir(opts.out_dir);

    std::unique_ptr<MetaPolicy> policy;
    std::optional<ComplexityProfile> profile;
    if (agent == "baseline") {
        policy = std::make_unique<BaselineMetaPolicy>(BaselinePolicy{alpha}, cfg.env.level_max);
    } else if (agent == "flow") {
        profile = obtain_profile(cfg, profile_path, out_dir);
        policy = std::make_unique<FlowMetaPolicy>(*profile, cfg.flow, cfg.env.level_max);
    } else {
        throw std::invalid_argument("trace: unknown agent '" + agent + "'");
    }
    const Trajectory traj = emit_trace(cfg.env, *policy, cfg.seed, out_dir, agent);
    std::printf("%s episode: %lld steps, terminal=%s\n", agent.c_str(),
                static_cast<long long>(traj.sample_count() - 1), to_string(traj.terminal));
    std::printf("wrote %s/%s_trace.csv and %s/complexity_actual.csv\n", opts.out_dir.c_str(),
                agent.c_str(), opts.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-ascension simulator: flow-matching meta control versus fixed-rate "
                 "baselines in environments with ability-dependent survival"};
    app.require_subcommand(1);

    CommonOpts mine_opts, sweep_opts, run_opts, compare_opts, trace_opts;
    std::string run_agent = "baseline", trace_agent = "baseline";
    double run_alpha = 1.0, trace_alpha = 1.0;
    std::string run_profile, compare_profile, trace_profile;

    bool mine_dump_log = false;
    auto* mine_cmd = app.add_subcommand("mine", "Mine a complexity profile from probe agents");
    add_common_options(mine_cmd, mine_opts);
    mine_cmd->add_flag("--dump-log", mine_dump_log, "Also write the raw ability log CSV");

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep baseline ascension rates");
    add_common_options(sweep_cmd, sweep_opts);

    auto* run_cmd = app.add_subcommand("run", "Run trials for one agent family");
    add_common_options(run_cmd, run_opts);
    run_cmd->add_option("--agent", run_agent, "baseline, flow, or probe")->capture_default_str();
    run_cmd->add_option("--alpha", run_alpha, "Baseline ascension rate")->capture_default_str();
    run_cmd->add_option("--profile", run_profile, "Profile CSV (mined fresh when omitted)");

    auto* compare_cmd =
        app.add_subcommand("compare", "Mine, sweep baselines, and run the flow agent");
    add_common_options(compare_cmd, compare_opts);
    compare_cmd->add_option("--profile", compare_profile,
                            "Profile CSV (mined fresh when omitted)");

    auto* trace_cmd = app.add_subcommand("trace", "Record a single episode as CSV");
    add_common_options(trace_cmd, trace_opts);
    trace_cmd->add_option("--agent", trace_agent, "baseline or flow")->capture_default_str();
    trace_cmd->add_option("--alpha", trace_alpha, "Baseline ascension rate")
        ->capture_default_str();
    trace_cmd->add_option("--profile", trace_profile, "Profile CSV (mined fresh when omitted)");

    try {
        app.parse(argc, argv);
        if (mine_cmd->parsed()) return cmd_mine(mine_opts, mine_dump_log);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        if (run_cmd->parsed()) return cmd_run(run_opts, run_agent, run_alpha, run_profile);
        if (compare_cmd->parsed()) return cmd_compare(compare_opts, compare_profile);
        if (trace_cmd->parsed()) return cmd_trace(trace_opts, trace_agent, trace_alpha,
                                                  trace_profile);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
