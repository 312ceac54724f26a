#include "flowsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowsim {

double euclidean_distance(const AbilityVector& a, const AbilityVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("euclidean_distance: dimension mismatch");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

void EnvironmentSpec::validate() const {
    if (!(level_max > 0.0) || !std::isfinite(level_max)) {
        throw std::invalid_argument("EnvironmentSpec: level_max must be > 0");
    }
    if (!(ambient_death >= 0.0 && ambient_death <= 1.0)) {
        throw std::invalid_argument("EnvironmentSpec: ambient_death must be in [0, 1]");
    }
    if (horizon < 1) {
        throw std::invalid_argument("EnvironmentSpec: horizon must be >= 1");
    }
    if (ability_dim < 1) {
        throw std::invalid_argument("EnvironmentSpec: ability_dim must be >= 1");
    }
    if (complexity_kind == ComplexityKind::CustomPower && !std::isfinite(exponent)) {
        throw std::invalid_argument("EnvironmentSpec: exponent must be finite");
    }
}

const char* to_string(AgentStatus s) {
    switch (s) {
    case AgentStatus::Alive: return "alive";
    case AgentStatus::Dead: return "dead";
    case AgentStatus::Goal: return "goal";
    }
    return "?";
}

AgentState make_initial_state(const EnvironmentSpec& spec) {
    AgentState s;
    s.time = 0;
    s.level = 0.0;
    s.ability.assign(static_cast<std::size_t>(spec.ability_dim), 0.0);
    s.status = spec.level_max <= 0.0 ? AgentStatus::Goal : AgentStatus::Alive;
    return s;
}

double actual_complexity(const EnvironmentSpec& spec, double level) {
    if (!(level >= 0.0 && level <= spec.level_max)) {
        throw std::domain_error("actual_complexity: level outside [0, level_max]");
    }
    switch (spec.complexity_kind) {
    case ComplexityKind::Sqrt: return std::sqrt(level);
    case ComplexityKind::Quadratic: return level * level;
    case ComplexityKind::CustomPower: return std::pow(level, spec.exponent);
    }
    return 0.0;
}

double death_probability(const EnvironmentSpec& spec, double ability, double complexity) {
    if (ability >= complexity) {
        return spec.ambient_death;
    }
    return std::min(1.0, spec.ambient_death + std::tanh(complexity - ability));
}

AgentState step(const EnvironmentSpec& spec, const AgentState& state, double target_level,
                RandomSource& rng) {
    if (state.status != AgentStatus::Alive) {
        throw std::logic_error("step: state is not Alive");
    }
    if (!(target_level >= 0.0 && target_level <= spec.level_max)) {
        throw std::invalid_argument("step: target_level outside [0, level_max]");
    }

    const double ability = state.ability.empty() ? 0.0 : state.ability[0];
    const double p_die = death_probability(spec, ability, actual_complexity(spec, state.level));

    AgentState next = state;
    next.time = state.time + 1;
    const double age = static_cast<double>(next.time);
    next.ability.assign(state.ability.size(), age);

    // The draw is consumed unconditionally so replay does not depend on the
    // branch taken.
    if (rng.bernoulli(p_die)) {
        next.status = AgentStatus::Dead;
        return next;
    }
    next.level = target_level;
    next.status = target_level >= spec.level_max ? AgentStatus::Goal : AgentStatus::Alive;
    return next;
}

} // namespace flowsim
