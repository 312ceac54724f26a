#include "flowsim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace flowsim {

namespace {

// Stream tags for sub-seed derivation; distinct tags keep the probe, sweep,
// flow and trace streams independent under one master seed.
constexpr std::uint64_t kTagProbe = 1;
constexpr std::uint64_t kTagSweepAlpha = 2;
constexpr std::uint64_t kTagTrialBatch = 3;
constexpr std::uint64_t kTagFlow = 4;
constexpr std::uint64_t kTagTrace = 5;

} // namespace

TrialStats compute_stats(const std::vector<double>& returns) {
    TrialStats s;
    s.n_trials = static_cast<std::int64_t>(returns.size());
    if (returns.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double r : returns) {
        sum += r;
    }
    s.mean_return = sum / static_cast<double>(returns.size());
    if (returns.size() < 2) {
        return s;
    }
    double sq = 0.0;
    for (double r : returns) {
        const double d = r - s.mean_return;
        sq += d * d;
    }
    const double n = static_cast<double>(returns.size());
    s.std_error = std::sqrt(sq / (n - 1.0)) / std::sqrt(n);
    return s;
}

double compute_return(const Trajectory& trajectory, std::int64_t horizon, double level_max) {
    if (trajectory.terminal != AgentStatus::Goal || !trajectory.goal_time) {
        return 0.0;
    }
    const std::int64_t goal_time = *trajectory.goal_time;
    double sum = 0.0;
    for (std::int64_t t = 0; t <= goal_time && t < trajectory.sample_count(); ++t) {
        sum += trajectory.level_at(t);
    }
    sum += level_max * static_cast<double>(horizon - goal_time);
    return sum;
}

RunResult run_trials(const EnvironmentSpec& spec, const PolicyFactory& factory, std::int64_t n,
                     std::uint64_t seed, std::uint64_t stream_tag) {
    if (n < 1) {
        throw std::invalid_argument("run_trials: n must be >= 1");
    }
    RunResult result;
    result.returns.reserve(static_cast<std::size_t>(n));
    IdentityBasePolicy base;
    for (std::int64_t i = 0; i < n; ++i) {
        RandomSource rng(derive_seed(seed, {stream_tag, static_cast<std::uint64_t>(i)}));
        const auto policy = factory(rng);
        const Trajectory traj = run_episode(spec, *policy, base, rng);
        result.returns.push_back(compute_return(traj, spec.horizon, spec.level_max));
    }
    result.stats = compute_stats(result.returns);
    return result;
}

double alpha_at(const AlphaSweep& sweep, int j) {
    if (j == sweep.count - 1) {
        return sweep.max; // endpoint-inclusive regardless of rounding
    }
    return sweep.min +
           static_cast<double>(j) * (sweep.max - sweep.min) / static_cast<double>(sweep.count - 1);
}

SweepResult sweep_alpha(const EnvironmentSpec& spec, const AlphaSweep& sweep, std::int64_t trials,
                        std::uint64_t seed) {
    if (sweep.count < 2) {
        throw std::invalid_argument("sweep_alpha: count must be >= 2");
    }
    if (!(sweep.min < sweep.max)) {
        throw std::invalid_argument("sweep_alpha: min must be < max");
    }
    SweepResult result;
    for (int j = 0; j < sweep.count; ++j) {
        const double alpha = alpha_at(sweep, j);
        const std::uint64_t sub_seed =
            derive_seed(seed, {kTagSweepAlpha, static_cast<std::uint64_t>(j)});
        auto factory = [alpha, &spec](RandomSource&) -> std::unique_ptr<MetaPolicy> {
            return std::make_unique<BaselineMetaPolicy>(BaselinePolicy{alpha}, spec.level_max);
        };
        RunResult run = run_trials(spec, factory, trials, sub_seed, kTagTrialBatch);
        result.alphas.push_back(alpha);
        result.stats.push_back(run.stats);
        result.returns.push_back(std::move(run.returns));
    }
    result.best_index = 0;
    for (std::size_t j = 1; j < result.stats.size(); ++j) {
        if (result.stats[j].mean_return > result.stats[result.best_index].mean_return) {
            result.best_index = j;
        }
    }
    return result;
}

ComplexityProfile mine_pipeline(const EnvironmentSpec& spec, const MiningParams& params,
                                std::uint64_t seed,
                                const std::optional<std::filesystem::path>& out_dir) {
    if (params.probes < 1) {
        throw std::invalid_argument("mine_pipeline: probes must be >= 1");
    }
    spec.validate();
    AbilityLog log(params.bin_width, spec.ability_dim);
    IdentityBasePolicy base;
    for (std::int64_t i = 0; i < params.probes; ++i) {
        RandomSource rng(derive_seed(seed, {kTagProbe, static_cast<std::uint64_t>(i)}));
        const ProbePolicy probe = make_probe(rng, spec.level_max, params.slopes);
        const ProbeMetaPolicy meta(probe, spec.level_max);
        Trajectory traj = run_episode(spec, meta, base, rng);
        // The sample at the goal state itself records a finishing age, not
        // the difficulty of a level still to be survived; keeping it would
        // bend the profile's top toward finishing times. Drop it and keep
        // the survivor's passage samples.
        if (traj.terminal == AgentStatus::Goal && !traj.levels.empty()) {
            traj.levels.pop_back();
            traj.abilities.resize(traj.abilities.size() -
                                  static_cast<std::size_t>(traj.ability_dim));
        }
        log.record(traj);
    }
    ComplexityProfile profile = mine(log, params.rho);
    if (profile.node_count() == 0) {
        throw std::runtime_error(
            "mine_pipeline: no bin has a surviving sample; cannot build a profile");
    }
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_profile_csv(profile, *out_dir / "profile.csv");
        if (spec.ability_dim == 1) {
            write_profile_comparison_csv(profile, spec, *out_dir / "mined_vs_actual.csv");
        }
        if (params.dump_log) {
            write_ability_log_csv(log, *out_dir / "ability_log.csv");
        }
    }
    return profile;
}

CompareResult compare(const EnvironmentSpec& spec, const std::string& env_name,
                      const ComplexityProfile& profile, const FlowConfig& flow_config,
                      const AlphaSweep& sweep, std::int64_t trials, std::uint64_t seed,
                      const std::optional<std::filesystem::path>& out_dir) {
    CompareResult result;
    result.sweep = sweep_alpha(spec, sweep, trials, seed);

    auto flow_factory = [&](RandomSource&) -> std::unique_ptr<MetaPolicy> {
        return std::make_unique<FlowMetaPolicy>(profile, flow_config, spec.level_max);
    };
    RunResult flow_run = run_trials(spec, flow_factory, trials, seed, kTagFlow);
    result.flow_stats = flow_run.stats;
    result.flow_returns = std::move(flow_run.returns);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::vector<ResultRow> rows;
        for (std::size_t j = 0; j < result.sweep.alphas.size(); ++j) {
            rows.push_back({env_name, "baseline", result.sweep.alphas[j],
                            result.sweep.stats[j].n_trials, result.sweep.stats[j].mean_return,
                            result.sweep.stats[j].std_error});
        }
        const auto& best = result.sweep.stats[result.sweep.best_index];
        rows.push_back({env_name, "baseline_best", result.sweep.alphas[result.sweep.best_index],
                        best.n_trials, best.mean_return, best.std_error});
        rows.push_back({env_name, "flow", std::nullopt, result.flow_stats.n_trials,
                        result.flow_stats.mean_return, result.flow_stats.std_error});
        write_results_csv(rows, *out_dir / "results.csv");
        write_returns_csv(result.sweep.returns[result.sweep.best_index],
                          *out_dir / "returns_baseline_best.csv");
        write_returns_csv(result.flow_returns, *out_dir / "returns_flow.csv");
    }
    return result;
}

Trajectory emit_trace(const EnvironmentSpec& spec, const MetaPolicy& policy, std::uint64_t seed,
                      const std::filesystem::path& out_dir, const std::string& name) {
    RandomSource rng(derive_seed(seed, {kTagTrace}));
    IdentityBasePolicy base;
    Trajectory traj = run_episode(spec, policy, base, rng);
    std::filesystem::create_directories(out_dir);
    write_trajectory_csv(traj, out_dir / (name + "_trace.csv"));
    write_curve_csv(spec, out_dir / "complexity_actual.csv");
    return traj;
}

void ExperimentConfig::validate() const {
    env.validate();
    flow.validate();
    if (probes < 1) throw std::invalid_argument("config: probes must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("config: rho must be in [0, 1)");
    if (!(bin_width > 0.0)) throw std::invalid_argument("config: bin_width must be > 0");
    if (alpha_sweep.count < 2) throw std::invalid_argument("config: alpha_count must be >= 2");
    if (!(alpha_sweep.min < alpha_sweep.max)) {
        throw std::invalid_argument("config: alpha_min must be < alpha_max");
    }
    for (const SlopeRange& r : probe_slopes) {
        if (!(r.lo > 0.0) || !(r.hi >= r.lo)) {
            throw std::invalid_argument("config: slope range must satisfy 0 < lo <= hi");
        }
    }
}

ExperimentConfig preset_config(const std::string& env_name) {
    ExperimentConfig cfg;
    cfg.env_name = env_name;
    if (env_name == "sqrt") {
        cfg.env.complexity_kind = ComplexityKind::Sqrt;
        cfg.env.level_max = 200.0;
        cfg.env.ambient_death = 0.001;
        cfg.alpha_sweep = {0.5, 3.0, 10};
        // Slow start, mid acceleration, fast finish: traces the rising
        // complexity curve from the safe side at every depth.
        cfg.probe_slopes = {SlopeRange{0.15, 2.0}, SlopeRange{3.0, 25.0}, SlopeRange{10.0, 28.0}};
    } else if (env_name == "quadratic") {
        cfg.env.complexity_kind = ComplexityKind::Quadratic;
        cfg.env.level_max = 40.0;
        cfg.env.ambient_death = 0.0001;
        cfg.alpha_sweep = {0.01, 0.028, 10};
        cfg.probe_slopes = uniform_probe_slopes({0.004, 0.08});
    } else {
        throw std::invalid_argument("unknown environment preset: " + env_name);
    }
    cfg.env.horizon = 4001;
    cfg.env.ability_dim = 1;
    return cfg;
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    if (value == "inf" || value == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
    }
    return v;
}

SlopeDist parse_slope_dist(const std::string& value) {
    if (value == "uniform") {
        return SlopeDist::Uniform;
    }
    if (value == "loguniform") {
        return SlopeDist::LogUniform;
    }
    throw std::invalid_argument("config: slope_dist must be uniform or loguniform");
}

std::int64_t to_int(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: bad integer for " + key + ": '" + value + "'");
    }
    return v;
}

} // namespace

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg = preset_config(kv.count("env") ? kv.at("env") : "sqrt");
    for (const auto& [key, value] : kv) {
        if (key == "env") {
            continue;
        } else if (key == "exponent") {
            cfg.env.complexity_kind = ComplexityKind::CustomPower;
            cfg.env.exponent = to_double(key, value);
        } else if (key == "level_max") {
            cfg.env.level_max = to_double(key, value);
        } else if (key == "pdagger") {
            cfg.env.ambient_death = to_double(key, value);
        } else if (key == "tmax") {
            cfg.env.horizon = to_int(key, value);
        } else if (key == "probes") {
            cfg.probes = to_int(key, value);
        } else if (key == "rho") {
            cfg.rho = to_double(key, value);
        } else if (key == "bin_width") {
            cfg.bin_width = to_double(key, value);
        } else if (key == "slope_min") {
            for (SlopeRange& r : cfg.probe_slopes) r.lo = to_double(key, value);
        } else if (key == "slope_max") {
            for (SlopeRange& r : cfg.probe_slopes) r.hi = to_double(key, value);
        } else if (key == "slope_dist") {
            for (SlopeRange& r : cfg.probe_slopes) r.dist = parse_slope_dist(value);
        } else if (key == "slope0_min") {
            cfg.probe_slopes[0].lo = to_double(key, value);
        } else if (key == "slope0_max") {
            cfg.probe_slopes[0].hi = to_double(key, value);
        } else if (key == "slope1_min") {
            cfg.probe_slopes[1].lo = to_double(key, value);
        } else if (key == "slope1_max") {
            cfg.probe_slopes[1].hi = to_double(key, value);
        } else if (key == "slope2_min") {
            cfg.probe_slopes[2].lo = to_double(key, value);
        } else if (key == "slope2_max") {
            cfg.probe_slopes[2].hi = to_double(key, value);
        } else if (key == "alpha_min") {
            cfg.alpha_sweep.min = to_double(key, value);
        } else if (key == "alpha_max") {
            cfg.alpha_sweep.max = to_double(key, value);
        } else if (key == "alpha_count") {
            cfg.alpha_sweep.count = static_cast<int>(to_int(key, value));
        } else if (key == "trials") {
            cfg.trials = to_int(key, value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
        } else if (key == "xi") {
            cfg.flow.xi = to_double(key, value);
        } else if (key == "search_step") {
            cfg.flow.search_step = to_double(key, value);
        } else if (key == "radius") {
            cfg.flow.neighborhood_radius = to_double(key, value);
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

} // namespace flowsim
