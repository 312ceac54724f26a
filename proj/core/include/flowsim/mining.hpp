#ifndef FLOWSIM_MINING_HPP
#define FLOWSIM_MINING_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "flowsim/agents.hpp"

namespace flowsim {

/// Per-level-bin record of observed agent abilities. A sample lands in bin
/// floor(level / bin_width) and carries whether its agent eventually reached
/// the goal level. Logs built over disjoint trajectory sets can be merged.
class AbilityLog {
public:
    explicit AbilityLog(double bin_width = 1.0, int ability_dim = 1);

    double bin_width() const { return bin_width_; }
    int ability_dim() const { return ability_dim_; }

    /// Appends every sample of the trajectory; reached_goal is true for all
    /// of them iff the trajectory terminated in Goal.
    void record(const Trajectory& trajectory);

    /// Appends one sample directly (used by tests and log construction).
    void add_sample(double level, const AbilityVector& ability, bool reached_goal);

    /// Bin-wise concatenation of another log (same bin_width and dimension).
    void merge(const AbilityLog& other);

    struct Bin {
        std::vector<double> abilities; // flat, ability_dim per sample
        std::vector<unsigned char> reached_goal;
        std::size_t sample_count() const { return reached_goal.size(); }
    };

    const std::map<std::int64_t, Bin>& bins() const { return bins_; }
    bool empty() const { return bins_.empty(); }

private:
    double bin_width_;
    int ability_dim_;
    std::map<std::int64_t, Bin> bins_;
};

/// Mined per-bin complexity estimates with a continuous query rule.
///
/// Each covered bin contributes one interpolation node anchored at the bin's
/// lower edge (the per-bin minimum statistic is attained near that edge for
/// monotone curves). lookup() interpolates linearly between consecutive
/// nodes, component-wise, and clamps to the first/last node beyond them.
class ComplexityProfile {
public:
    ComplexityProfile() = default;
    ComplexityProfile(double bin_width, int ability_dim,
                      std::vector<std::int64_t> bin_indices, std::vector<double> values);

    double bin_width() const { return bin_width_; }
    int ability_dim() const { return ability_dim_; }
    std::size_t node_count() const { return bin_indices_.size(); }
    const std::vector<std::int64_t>& bin_indices() const { return bin_indices_; }

    /// Level of interpolation node i (the bin's lower edge).
    double node_level(std::size_t i) const;

    /// Mined value of node i.
    AbilityVector node_value(std::size_t i) const;

    bool covered(std::int64_t bin_index) const;

    /// Interpolated complexity estimate at a level.
    /// Throws std::runtime_error when the profile has no coverage.
    AbilityVector lookup(double level) const;

    /// Scalar convenience for ability_dim == 1 profiles.
    double lookup1(double level) const;

private:
    double bin_width_ = 1.0;
    int ability_dim_ = 1;
    std::vector<std::int64_t> bin_indices_; // sorted, covered bins only
    std::vector<double> values_;            // flat, ability_dim per node
    bool contiguous_ = false;
};

/// Mines a complexity profile from a log: per bin, drop non-survivors, drop
/// the lowest floor(rho * m) survivor values per component, then take the
/// per-component minimum of the remainder. Bins without survivors are
/// excluded from coverage (a summary warning is printed to stderr).
/// Throws std::invalid_argument for rho outside [0, 1).
ComplexityProfile mine(const AbilityLog& log, double rho);

/// Mean absolute deviation between the profile and the ground-truth curve,
/// evaluated at covered-bin centers (clamped to level_max).
/// Requires ability_dim == 1 and non-empty coverage.
double profile_error(const ComplexityProfile& profile, const EnvironmentSpec& spec);

} // namespace flowsim

#endif
