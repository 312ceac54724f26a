#ifndef FLOWSIM_ENV_HPP
#define FLOWSIM_ENV_HPP

#include <cstdint>

#include "flowsim/ability.hpp"
#include "flowsim/random.hpp"

namespace flowsim {

/// Shape of the ground-truth complexity curve over levels.
enum class ComplexityKind {
    Sqrt,       // c(L) = sqrt(L)
    Quadratic,  // c(L) = L^2
    CustomPower // c(L) = L^exponent
};

/// Immutable description of a level-structured environment.
///
/// Levels are continuous in [0, level_max]; reaching a level >= level_max is
/// the goal. At every step the agent dies with a probability that depends on
/// how far its ability falls short of the complexity of the level it
/// currently occupies; an ambient death probability applies regardless.
struct EnvironmentSpec {
    ComplexityKind complexity_kind = ComplexityKind::Sqrt;
    double exponent = 1.0;      // used by CustomPower only
    double level_max = 200.0;   // goal level, > 0
    double ambient_death = 0.0; // p-dagger, in [0, 1]
    std::int64_t horizon = 4001;
    int ability_dim = 1;

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

enum class AgentStatus { Alive, Dead, Goal };

const char* to_string(AgentStatus s);

/// Full agent state at one timestep. In the built-in testbed the ability
/// components all equal the agent's age (= time).
struct AgentState {
    std::int64_t time = 0;
    double level = 0.0;
    AbilityVector ability;
    AgentStatus status = AgentStatus::Alive;
};

/// Start state: t = 0, level 0, ability components all zero, Alive.
AgentState make_initial_state(const EnvironmentSpec& spec);

/// Ground-truth complexity at a level. Throws std::domain_error when level
/// is outside [0, level_max].
double actual_complexity(const EnvironmentSpec& spec, double level);

/// Per-step death probability given scalar ability and level complexity:
/// p-dagger when ability >= complexity, otherwise
/// min(1, p-dagger + tanh(complexity - ability)). Always in [p-dagger, 1].
double death_probability(const EnvironmentSpec& spec, double ability, double complexity);

/// One environment transition. The death draw is evaluated against the
/// complexity of the level the agent currently occupies; a surviving agent
/// lands exactly on target_level with time and ability advanced by one step.
/// status becomes Goal when target_level >= level_max.
///
/// Throws std::logic_error when called on a non-Alive state and
/// std::invalid_argument when target_level is outside [0, level_max].
AgentState step(const EnvironmentSpec& spec, const AgentState& state, double target_level,
                RandomSource& rng);

} // namespace flowsim

#endif
