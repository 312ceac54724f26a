#ifndef FLOWSIM_FLOW_HPP
#define FLOWSIM_FLOW_HPP

#include <cstdint>
#include <limits>

#include "flowsim/mining.hpp"

namespace flowsim {

/// Parameters of the flow-maximizing meta policy.
struct FlowConfig {
    double xi = 0.001;         // division guard in the flow degree, > 0
    double search_step = 0.001; // grid spacing of the level search, > 0
    double neighborhood_radius = std::numeric_limits<double>::infinity(); // search radius

    void validate() const;
};

/// Degree of flow: 1 / (|ability - complexity| + xi), maximal (= 1/xi) when
/// the vectors match exactly. Throws std::invalid_argument on dimension
/// mismatch or non-positive xi.
double flow_degree(const AbilityVector& ability, const AbilityVector& complexity, double xi);

/// The level lattice searched by the meta policy: points current + k * step
/// for integer k, clipped to [lo, hi]; the search additionally always
/// considers lo and hi themselves. Exposed so that exhaustive reference
/// scans in tests enumerate exactly the same points as the implementation.
struct LevelGrid {
    double origin = 0.0;
    double step = 1.0;
    std::int64_t k_min = 0;
    std::int64_t k_max = 0;

    double level_at(std::int64_t k) const { return origin + static_cast<double>(k) * step; }

    static LevelGrid make(double origin, double step, double lo, double hi);
};

/// Selects the grid level maximizing the flow degree against the profile,
/// searching [current - radius, current + radius] clipped to [0, level_max].
/// Ties break to the higher level, so plateaus of equal flow are crossed
/// rather than camped on. Exact on the grid (candidate pruning only skips
/// points that cannot win).
double select_target_level(const ComplexityProfile& profile, const AbilityVector& ability,
                           double current_level, const FlowConfig& config, double level_max);

/// Meta policy driving an agent by select_target_level on a mined profile.
class FlowMetaPolicy final : public MetaPolicy {
public:
    FlowMetaPolicy(const ComplexityProfile& profile, FlowConfig config, double level_max)
        : profile_(&profile), config_(config), level_max_(level_max) {
        config_.validate();
    }
    double target_level(const AgentState& state) const override {
        return select_target_level(*profile_, state.ability, state.level, config_, level_max_);
    }

private:
    const ComplexityProfile* profile_;
    FlowConfig config_;
    double level_max_;
};

} // namespace flowsim

#endif
