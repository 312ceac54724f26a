#include "flowsim/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace flowsim {

void FlowConfig::validate() const {
    if (!(xi > 0.0)) {
        throw std::invalid_argument("FlowConfig: xi must be > 0");
    }
    if (!(search_step > 0.0)) {
        throw std::invalid_argument("FlowConfig: search_step must be > 0");
    }
    if (!(neighborhood_radius > 0.0)) {
        throw std::invalid_argument("FlowConfig: neighborhood_radius must be > 0");
    }
}

double flow_degree(const AbilityVector& ability, const AbilityVector& complexity, double xi) {
    if (!(xi > 0.0)) {
        throw std::invalid_argument("flow_degree: xi must be > 0");
    }
    return 1.0 / (euclidean_distance(ability, complexity) + xi);
}

LevelGrid LevelGrid::make(double origin, double step, double lo, double hi) {
    LevelGrid g;
    g.origin = origin;
    g.step = step;
    // Arithmetic bounds, then adjust so that the admissible set is exactly
    // { k : lo <= origin + k * step <= hi } under double arithmetic.
    auto k_lo = static_cast<std::int64_t>(std::ceil((lo - origin) / step));
    auto k_hi = static_cast<std::int64_t>(std::floor((hi - origin) / step));
    while (g.level_at(k_lo) < lo) ++k_lo;
    while (g.level_at(k_lo - 1) >= lo) --k_lo;
    while (g.level_at(k_hi) > hi) --k_hi;
    while (g.level_at(k_hi + 1) <= hi) ++k_hi;
    g.k_min = k_lo;
    g.k_max = k_hi;
    return g;
}

namespace {

// Tie rule of the level search: higher flow first, then the higher level.
// Preferring the higher level on ties keeps the agent moving through the
// flat stretches of a mined profile (whose values are discrete observed
// abilities), and in particular carries it into the goal level once its
// ability matches the top of the profile instead of parking below it.
bool candidate_improves(double f_new, double level_new, double f_best, double level_best) {
    if (f_new != f_best) {
        return f_new > f_best;
    }
    return level_new > level_best;
}

void push_bracket(std::vector<std::int64_t>& out, double level, const LevelGrid& grid) {
    if (!std::isfinite(level)) {
        return;
    }
    const double kf = (level - grid.origin) / grid.step;
    if (kf < static_cast<double>(grid.k_min) - 2.0 || kf > static_cast<double>(grid.k_max) + 2.0) {
        // Clamp far-away brackets to the edge; the edge points are pushed
        // separately anyway.
        return;
    }
    const auto base = static_cast<std::int64_t>(std::floor(kf));
    for (std::int64_t k = base - 2; k <= base + 2; ++k) {
        if (k >= grid.k_min && k <= grid.k_max) {
            out.push_back(k);
        }
    }
}

} // namespace

double select_target_level(const ComplexityProfile& profile, const AbilityVector& ability,
                           double current_level, const FlowConfig& config, double level_max) {
    config.validate();
    if (profile.node_count() == 0) {
        throw std::runtime_error("select_target_level: profile has empty coverage");
    }
    if (static_cast<int>(ability.size()) != profile.ability_dim()) {
        throw std::invalid_argument("select_target_level: ability dimension mismatch");
    }
    if (!(current_level >= 0.0 && current_level <= level_max)) {
        throw std::invalid_argument("select_target_level: current_level outside [0, level_max]");
    }

    const double lo = std::max(0.0, current_level - config.neighborhood_radius);
    const double hi = std::min(level_max, current_level + config.neighborhood_radius);
    const LevelGrid grid = LevelGrid::make(current_level, config.search_step, lo, hi);

    // The flow degree along a profile segment is unimodal (the distance to a
    // linearly interpolated value is a V / convex parabola), so the grid
    // argmax lies next to the distance minimizer or at a segment boundary.
    // Evaluating those points plus k = 0 covers every point that can win.
    std::vector<std::int64_t> candidates;
    candidates.reserve(8 * profile.node_count() + 8);
    candidates.push_back(0);
    candidates.push_back(grid.k_min);
    candidates.push_back(grid.k_max);
    if (grid.k_min + 1 <= grid.k_max) candidates.push_back(grid.k_min + 1);
    if (grid.k_max - 1 >= grid.k_min) candidates.push_back(grid.k_max - 1);

    const std::size_t n = profile.node_count();
    const auto k_dim = static_cast<std::size_t>(profile.ability_dim());
    for (std::size_t i = 0; i < n; ++i) {
        push_bracket(candidates, profile.node_level(i), grid);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x0 = profile.node_level(i);
        const double x1 = profile.node_level(i + 1);
        const AbilityVector v0 = profile.node_value(i);
        const AbilityVector v1 = profile.node_value(i + 1);
        // Minimize |ability - c(L)|^2 over the segment: quadratic in the
        // interpolation parameter t.
        double num = 0.0;
        double den = 0.0;
        for (std::size_t c = 0; c < k_dim; ++c) {
            const double d = v1[c] - v0[c];
            num += d * (ability[c] - v0[c]);
            den += d * d;
        }
        if (den > 0.0) {
            const double t = num / den;
            if (t > 0.0 && t < 1.0) {
                push_bracket(candidates, x0 + t * (x1 - x0), grid);
            }
        }
    }

    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    bool have_best = false;
    double best_f = 0.0;
    double best_level = 0.0;
    auto consider = [&](double level) {
        const double f = flow_degree(ability, profile.lookup(level), config.xi);
        if (!have_best || candidate_improves(f, level, best_f, best_level)) {
            have_best = true;
            best_f = f;
            best_level = level;
        }
    };
    for (std::int64_t k : candidates) {
        if (k < grid.k_min || k > grid.k_max) {
            continue;
        }
        consider(grid.level_at(k));
    }
    // The window edges are always candidates, whether or not the lattice
    // anchored at the current level lands on them. Without this the goal
    // level could only be entered when the lattice hit it exactly.
    consider(lo);
    consider(hi);
    return best_level;
}

} // namespace flowsim
