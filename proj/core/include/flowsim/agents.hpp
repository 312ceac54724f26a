#ifndef FLOWSIM_AGENTS_HPP
#define FLOWSIM_AGENTS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "flowsim/env.hpp"

namespace flowsim {

/// Fixed-rate ascension: be at level alpha * t at time t.
struct BaselinePolicy {
    double alpha = 1.0;
};

/// Level the baseline agent should occupy at `time`: min(alpha * time, level_max).
double baseline_target(const BaselinePolicy& policy, std::int64_t time, double level_max);

/// Piecewise-linear ascension with two slope-change levels. Segments are
/// keyed on the agent's current level: slope[0] below joint[0], slope[1]
/// between the joints, slope[2] at or above joint[1].
struct ProbePolicy {
    std::array<double, 3> slopes{1.0, 1.0, 1.0};
    std::array<double, 2> joints{0.0, 0.0}; // ordered, in [0, level_max]
};

enum class SlopeDist {
    Uniform,   // uniform on [lo, hi]
    LogUniform // uniform in log space; spreads probes across slope scales
};

/// Closed interval of admissible probe slopes and how to sample it.
struct SlopeRange {
    double lo = 0.0;
    double hi = 0.0;
    SlopeDist dist = SlopeDist::Uniform;
};

/// Draws a random probe policy: first slope, then the two joint levels
/// (ordered), then the remaining two slopes, each slope drawn from the
/// slope range with its configured distribution.
/// Throws std::invalid_argument when the slope range is empty or non-positive.
ProbePolicy make_probe(RandomSource& rng, double level_max, const SlopeRange& slope_range);

/// Per-segment probe slope ranges. With one range per segment the probe
/// ensemble can be shaped to the environment (a rising complexity curve is
/// traced closely by slow-start, fast-finish probes), which sharpens the
/// mined per-bin minima considerably.
using ProbeSlopes = std::array<SlopeRange, 3>;

/// Same draw order as above with segment i's slope taken from ranges[i].
ProbePolicy make_probe(RandomSource& rng, double level_max, const ProbeSlopes& ranges);

inline ProbeSlopes uniform_probe_slopes(const SlopeRange& range) {
    return {range, range, range};
}

/// Next-step level for a probe agent at current_level, clipped to level_max.
double probe_target(const ProbePolicy& policy, double current_level, double level_max);

/// Per-episode record. Samples are per-timestep with times implicitly
/// 0, 1, ..., sample_count()-1; abilities are stored flat, ability_dim
/// values per sample. The death state is not a sample; `terminal` carries
/// how the episode ended (Alive = still alive when the horizon ran out).
struct Trajectory {
    int ability_dim = 1;
    std::vector<double> levels;
    std::vector<double> abilities;
    AgentStatus terminal = AgentStatus::Alive;
    std::optional<std::int64_t> goal_time;

    std::int64_t sample_count() const { return static_cast<std::int64_t>(levels.size()); }
    double level_at(std::int64_t t) const { return levels[static_cast<std::size_t>(t)]; }
    double ability_at(std::int64_t t, int component = 0) const {
        return abilities[static_cast<std::size_t>(t) * static_cast<std::size_t>(ability_dim) +
                         static_cast<std::size_t>(component)];
    }
};

/// Meta-control policy: picks the target level for the next step.
class MetaPolicy {
public:
    virtual ~MetaPolicy() = default;
    virtual double target_level(const AgentState& state) const = 0;
};

/// Within-level control. Implementations must not change the level; the
/// episode loop enforces this.
class BasePolicy {
public:
    virtual ~BasePolicy() = default;
    virtual AgentState act(const AgentState& state) const = 0;
};

/// No-op base control, the only control in the built-in testbed.
class IdentityBasePolicy final : public BasePolicy {
public:
    AgentState act(const AgentState& state) const override { return state; }
};

class BaselineMetaPolicy final : public MetaPolicy {
public:
    BaselineMetaPolicy(BaselinePolicy policy, double level_max)
        : policy_(policy), level_max_(level_max) {}
    double target_level(const AgentState& state) const override {
        return baseline_target(policy_, state.time + 1, level_max_);
    }

private:
    BaselinePolicy policy_;
    double level_max_;
};

class ProbeMetaPolicy final : public MetaPolicy {
public:
    ProbeMetaPolicy(ProbePolicy policy, double level_max)
        : policy_(policy), level_max_(level_max) {}
    double target_level(const AgentState& state) const override {
        return probe_target(policy_, state.level, level_max_);
    }
    const ProbePolicy& policy() const { return policy_; }

private:
    ProbePolicy policy_;
    double level_max_;
};

/// Runs one episode from the start state: meta step, environment transition,
/// then base control within the level, until death, goal, or the horizon.
/// Throws std::logic_error if the base policy changes the level.
Trajectory run_episode(const EnvironmentSpec& spec, const MetaPolicy& meta,
                       const BasePolicy& base, RandomSource& rng);

} // namespace flowsim

#endif
