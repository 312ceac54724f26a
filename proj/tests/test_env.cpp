#include <doctest.h>

#include <cmath>

#include "flowsim/env.hpp"

using namespace flowsim;

namespace {

EnvironmentSpec sqrt_env(double pdagger = 0.001) {
    EnvironmentSpec spec;
    spec.complexity_kind = ComplexityKind::Sqrt;
    spec.level_max = 200.0;
    spec.ambient_death = pdagger;
    spec.horizon = 4001;
    return spec;
}

} // namespace

TEST_CASE("actual_complexity closed forms") {
    EnvironmentSpec spec = sqrt_env();
    CHECK(actual_complexity(spec, 100.0) == 10.0);
    CHECK(actual_complexity(spec, 200.0) == doctest::Approx(std::sqrt(200.0)).epsilon(1e-15));
    CHECK(actual_complexity(spec, 0.0) == 0.0);

    spec.complexity_kind = ComplexityKind::Quadratic;
    spec.level_max = 40.0;
    CHECK(actual_complexity(spec, 0.0) == 0.0);
    CHECK(actual_complexity(spec, 7.0) == 49.0);

    spec.complexity_kind = ComplexityKind::CustomPower;
    spec.exponent = 3.0;
    CHECK(actual_complexity(spec, 2.0) == 8.0);
}

TEST_CASE("actual_complexity rejects out-of-range levels") {
    const EnvironmentSpec spec = sqrt_env();
    CHECK_THROWS_AS(actual_complexity(spec, -0.001), std::domain_error);
    CHECK_THROWS_AS(actual_complexity(spec, 200.001), std::domain_error);
}

TEST_CASE("death_probability closed forms") {
    EnvironmentSpec spec = sqrt_env(0.001);
    // Able agent: ambient only.
    CHECK(death_probability(spec, 10.0, 9.0) == 0.001);
    // Boundary ability == complexity is the able case.
    CHECK(death_probability(spec, 9.0, 9.0) == 0.001);
    // Deficit of one: p + tanh(1), reference value from the closed form.
    const double expected = 0.001 + 0.7615941559557649;
    CHECK(death_probability(spec, 8.0, 9.0) ==
          doctest::Approx(expected).epsilon(1e-12));
    // Large deficit is capped at one.
    spec.ambient_death = 0.5;
    CHECK(death_probability(spec, 0.0, 10.0) == 1.0);
}

TEST_CASE("death_probability is monotone in the deficit and bounded") {
    EnvironmentSpec spec = sqrt_env(0.01);
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double deficit = -2.0 + static_cast<double>(i) * 0.02;
        const double p = death_probability(spec, 5.0, 5.0 + deficit);
        CHECK(p >= spec.ambient_death);
        CHECK(p <= 1.0);
        if (i > 0) {
            CHECK(p >= prev);
        }
        if (deficit <= 0.0) {
            CHECK(p == spec.ambient_death);
        }
        prev = p;
    }
}

TEST_CASE("step moves exactly to the target and ages the agent") {
    EnvironmentSpec spec = sqrt_env(0.0);
    RandomSource rng(1);
    AgentState s = make_initial_state(spec);
    AgentState next = step(spec, s, 60.0, rng);
    CHECK(next.status == AgentStatus::Alive);
    CHECK(next.level == 60.0);
    CHECK(next.time == 1);
    CHECK(next.ability[0] == 1.0);

    // Reaching level_max flips an able agent to Goal.
    AgentState able;
    able.time = 60;
    able.level = 60.0;
    able.ability = {60.0};
    able.status = AgentStatus::Alive;
    AgentState goal = step(spec, able, spec.level_max, rng);
    CHECK(goal.status == AgentStatus::Goal);
    CHECK(goal.level == 200.0);
}

TEST_CASE("step with certain death kills immediately") {
    EnvironmentSpec spec = sqrt_env(1.0);
    RandomSource rng(1);
    AgentState s = make_initial_state(spec);
    const AgentState next = step(spec, s, 10.0, rng);
    CHECK(next.status == AgentStatus::Dead);
}

TEST_CASE("step usage errors") {
    EnvironmentSpec spec = sqrt_env(0.0);
    RandomSource rng(1);
    AgentState dead = make_initial_state(spec);
    dead.status = AgentStatus::Dead;
    CHECK_THROWS_AS(step(spec, dead, 10.0, rng), std::logic_error);

    AgentState s = make_initial_state(spec);
    CHECK_THROWS_AS(step(spec, s, -1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(step(spec, s, 201.0, rng), std::invalid_argument);
}

TEST_CASE("step death frequency matches the formula") {
    // Able case: ambient only.
    EnvironmentSpec spec = sqrt_env(0.001);
    RandomSource rng(2024);
    AgentState s;
    s.time = 50;
    s.level = 50.0;
    s.ability = {50.0};
    s.status = AgentStatus::Alive;

    const int n = 100000;
    int deaths = 0;
    for (int i = 0; i < n; ++i) {
        deaths += step(spec, s, 60.0, rng).status == AgentStatus::Dead;
    }
    const double p = death_probability(spec, 50.0, actual_complexity(spec, 50.0));
    CHECK(p == 0.001);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(deaths) / n - p) <= 4.0 * sigma);

    // Deficit case: ambient + tanh.
    AgentState weak = s;
    weak.time = 5;
    weak.ability = {5.0};
    deaths = 0;
    for (int i = 0; i < n; ++i) {
        deaths += step(spec, weak, 60.0, rng).status == AgentStatus::Dead;
    }
    const double p2 = death_probability(spec, 5.0, actual_complexity(spec, 50.0));
    const double sigma2 = std::sqrt(p2 * (1.0 - p2) / n);
    CHECK(std::abs(static_cast<double>(deaths) / n - p2) <= 4.0 * sigma2);
}

TEST_CASE("step replays bit-identically under the same seed") {
    EnvironmentSpec spec = sqrt_env(0.3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSource a(seed), b(seed);
        AgentState sa = make_initial_state(spec);
        AgentState sb = make_initial_state(spec);
        for (int i = 0; i < 50 && sa.status == AgentStatus::Alive; ++i) {
            sa = step(spec, sa, 1.0 * i, a);
            sb = step(spec, sb, 1.0 * i, b);
            CHECK(sa.status == sb.status);
            CHECK(sa.level == sb.level);
            CHECK(sa.time == sb.time);
        }
    }
}

TEST_CASE("step consumes one draw on both branches") {
    EnvironmentSpec live = sqrt_env(0.0);
    EnvironmentSpec lethal = sqrt_env(1.0);
    RandomSource a(99), b(99);
    AgentState s = make_initial_state(live);
    step(live, s, 10.0, a);
    step(lethal, s, 10.0, b);
    // Replay stays aligned whichever way the death draw went.
    for (int i = 0; i < 10; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("spec validation rejects bad fields") {
    EnvironmentSpec spec = sqrt_env();
    spec.level_max = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = sqrt_env();
    spec.ambient_death = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = sqrt_env();
    spec.horizon = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
