#include "flowsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowsim {

double baseline_target(const BaselinePolicy& policy, std::int64_t time, double level_max) {
    return std::min(policy.alpha * static_cast<double>(time), level_max);
}

namespace {

double draw_slope(RandomSource& rng, const SlopeRange& range) {
    if (range.dist == SlopeDist::LogUniform) {
        return std::exp(rng.uniform(std::log(range.lo), std::log(range.hi)));
    }
    return rng.uniform(range.lo, range.hi);
}

} // namespace

ProbePolicy make_probe(RandomSource& rng, double level_max, const SlopeRange& slope_range) {
    return make_probe(rng, level_max, uniform_probe_slopes(slope_range));
}

ProbePolicy make_probe(RandomSource& rng, double level_max, const ProbeSlopes& ranges) {
    for (const SlopeRange& r : ranges) {
        if (!(r.lo > 0.0) || !(r.hi >= r.lo) || !std::isfinite(r.hi)) {
            throw std::invalid_argument("make_probe: slope range must satisfy 0 < lo <= hi");
        }
    }
    ProbePolicy p;
    p.slopes[0] = draw_slope(rng, ranges[0]);
    const double a = rng.uniform(0.0, level_max);
    const double b = rng.uniform(0.0, level_max);
    p.joints[0] = std::min(a, b);
    p.joints[1] = std::max(a, b);
    p.slopes[1] = draw_slope(rng, ranges[1]);
    p.slopes[2] = draw_slope(rng, ranges[2]);
    return p;
}

double probe_target(const ProbePolicy& policy, double current_level, double level_max) {
    double slope;
    if (current_level < policy.joints[0]) {
        slope = policy.slopes[0];
    } else if (current_level < policy.joints[1]) {
        slope = policy.slopes[1];
    } else {
        slope = policy.slopes[2];
    }
    return std::min(current_level + slope, level_max);
}

Trajectory run_episode(const EnvironmentSpec& spec, const MetaPolicy& meta,
                       const BasePolicy& base, RandomSource& rng) {
    spec.validate();
    Trajectory traj;
    traj.ability_dim = spec.ability_dim;

    AgentState state = make_initial_state(spec);
    auto record_sample = [&traj](const AgentState& s) {
        traj.levels.push_back(s.level);
        traj.abilities.insert(traj.abilities.end(), s.ability.begin(), s.ability.end());
    };
    record_sample(state);

    while (state.status == AgentStatus::Alive && state.time < spec.horizon) {
        const double target = meta.target_level(state);
        AgentState moved = step(spec, state, target, rng);
        if (moved.status == AgentStatus::Dead) {
            traj.terminal = AgentStatus::Dead;
            return traj;
        }
        AgentState settled = base.act(moved);
        if (settled.level != moved.level) {
            throw std::logic_error("run_episode: base policy changed the level");
        }
        state = settled;
        record_sample(state);
        if (state.status == AgentStatus::Goal) {
            traj.terminal = AgentStatus::Goal;
            traj.goal_time = state.time;
            return traj;
        }
    }
    traj.terminal = AgentStatus::Alive; // horizon exhausted
    return traj;
}

} // namespace flowsim
