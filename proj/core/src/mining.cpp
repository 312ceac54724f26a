#include "flowsim/mining.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace flowsim {

AbilityLog::AbilityLog(double bin_width, int ability_dim)
    : bin_width_(bin_width), ability_dim_(ability_dim) {
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("AbilityLog: bin_width must be > 0");
    }
    if (ability_dim < 1) {
        throw std::invalid_argument("AbilityLog: ability_dim must be >= 1");
    }
}

void AbilityLog::add_sample(double level, const AbilityVector& ability, bool reached_goal) {
    if (static_cast<int>(ability.size()) != ability_dim_) {
        throw std::invalid_argument("AbilityLog: ability dimension mismatch");
    }
    const auto index = static_cast<std::int64_t>(std::floor(level / bin_width_));
    Bin& bin = bins_[index];
    bin.abilities.insert(bin.abilities.end(), ability.begin(), ability.end());
    bin.reached_goal.push_back(reached_goal ? 1 : 0);
}

void AbilityLog::record(const Trajectory& trajectory) {
    if (trajectory.ability_dim != ability_dim_) {
        throw std::invalid_argument("AbilityLog: trajectory ability dimension mismatch");
    }
    const bool survived = trajectory.terminal == AgentStatus::Goal;
    const auto k = static_cast<std::size_t>(ability_dim_);
    for (std::int64_t t = 0; t < trajectory.sample_count(); ++t) {
        const auto index =
            static_cast<std::int64_t>(std::floor(trajectory.level_at(t) / bin_width_));
        Bin& bin = bins_[index];
        const std::size_t off = static_cast<std::size_t>(t) * k;
        bin.abilities.insert(bin.abilities.end(), trajectory.abilities.begin() + off,
                             trajectory.abilities.begin() + off + k);
        bin.reached_goal.push_back(survived ? 1 : 0);
    }
}

void AbilityLog::merge(const AbilityLog& other) {
    if (other.bin_width_ != bin_width_ || other.ability_dim_ != ability_dim_) {
        throw std::invalid_argument("AbilityLog: merge with incompatible log");
    }
    for (const auto& [index, src] : other.bins_) {
        Bin& dst = bins_[index];
        dst.abilities.insert(dst.abilities.end(), src.abilities.begin(), src.abilities.end());
        dst.reached_goal.insert(dst.reached_goal.end(), src.reached_goal.begin(),
                                src.reached_goal.end());
    }
}

ComplexityProfile::ComplexityProfile(double bin_width, int ability_dim,
                                     std::vector<std::int64_t> bin_indices,
                                     std::vector<double> values)
    : bin_width_(bin_width),
      ability_dim_(ability_dim),
      bin_indices_(std::move(bin_indices)),
      values_(std::move(values)) {
    if (!(bin_width_ > 0.0) || ability_dim_ < 1) {
        throw std::invalid_argument("ComplexityProfile: invalid bin_width or dimension");
    }
    if (values_.size() != bin_indices_.size() * static_cast<std::size_t>(ability_dim_)) {
        throw std::invalid_argument("ComplexityProfile: value count mismatch");
    }
    if (!std::is_sorted(bin_indices_.begin(), bin_indices_.end())) {
        throw std::invalid_argument("ComplexityProfile: bin indices must be sorted");
    }
    contiguous_ = !bin_indices_.empty() &&
                  bin_indices_.back() - bin_indices_.front() + 1 ==
                      static_cast<std::int64_t>(bin_indices_.size());
}

double ComplexityProfile::node_level(std::size_t i) const {
    return static_cast<double>(bin_indices_[i]) * bin_width_;
}

AbilityVector ComplexityProfile::node_value(std::size_t i) const {
    const auto k = static_cast<std::size_t>(ability_dim_);
    AbilityVector v(values_.begin() + i * k, values_.begin() + (i + 1) * k);
    return v;
}

bool ComplexityProfile::covered(std::int64_t bin_index) const {
    return std::binary_search(bin_indices_.begin(), bin_indices_.end(), bin_index);
}

AbilityVector ComplexityProfile::lookup(double level) const {
    if (bin_indices_.empty()) {
        throw std::runtime_error("ComplexityProfile: lookup on empty coverage");
    }
    const auto k = static_cast<std::size_t>(ability_dim_);
    const std::size_t n = bin_indices_.size();

    std::size_t hi;
    if (level <= node_level(0)) {
        return node_value(0);
    }
    if (level >= node_level(n - 1)) {
        return node_value(n - 1);
    }
    if (contiguous_) {
        const auto bin = static_cast<std::int64_t>(std::floor(level / bin_width_));
        hi = static_cast<std::size_t>(bin - bin_indices_.front()) + 1;
        // level == a node level exactly lands on the segment starting there
        if (hi >= n) hi = n - 1;
    } else {
        const auto it = std::upper_bound(bin_indices_.begin(), bin_indices_.end(),
                                         static_cast<std::int64_t>(std::floor(level / bin_width_)));
        hi = static_cast<std::size_t>(it - bin_indices_.begin());
        if (hi == 0) hi = 1;
        if (hi >= n) hi = n - 1;
    }
    const std::size_t lo = hi - 1;
    const double x0 = node_level(lo);
    const double x1 = node_level(hi);
    const double t = (level - x0) / (x1 - x0);
    AbilityVector out(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        const double v0 = values_[lo * k + c];
        const double v1 = values_[hi * k + c];
        out[c] = v0 + t * (v1 - v0);
    }
    return out;
}

double ComplexityProfile::lookup1(double level) const {
    if (ability_dim_ != 1) {
        throw std::logic_error("ComplexityProfile: lookup1 requires ability_dim == 1");
    }
    return lookup(level)[0];
}

ComplexityProfile mine(const AbilityLog& log, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument("mine: rho must be in [0, 1)");
    }
    const auto k = static_cast<std::size_t>(log.ability_dim());

    std::vector<std::int64_t> covered;
    std::vector<double> values;
    std::size_t uncovered = 0;
    std::vector<double> column;

    for (const auto& [index, bin] : log.bins()) {
        const std::size_t m_all = bin.sample_count();
        std::size_t survivors = 0;
        for (unsigned char g : bin.reached_goal) {
            survivors += g;
        }
        if (survivors == 0) {
            ++uncovered;
            continue;
        }
        const auto trimmed = static_cast<std::size_t>(
            std::floor(rho * static_cast<double>(survivors)));
        covered.push_back(index);
        for (std::size_t c = 0; c < k; ++c) {
            column.clear();
            column.reserve(survivors);
            for (std::size_t s = 0; s < m_all; ++s) {
                if (bin.reached_goal[s]) {
                    column.push_back(bin.abilities[s * k + c]);
                }
            }
            // Minimum after dropping the `trimmed` lowest values is the
            // order statistic of rank `trimmed`.
            std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(trimmed),
                             column.end());
            values.push_back(column[trimmed]);
        }
    }
    if (uncovered > 0) {
        std::cerr << "mine: " << uncovered << " bin(s) had no surviving samples and were excluded\n";
    }
    return ComplexityProfile(log.bin_width(), log.ability_dim(), std::move(covered),
                             std::move(values));
}

double profile_error(const ComplexityProfile& profile, const EnvironmentSpec& spec) {
    if (profile.ability_dim() != 1) {
        throw std::invalid_argument("profile_error: requires ability_dim == 1");
    }
    if (profile.node_count() == 0) {
        throw std::runtime_error("profile_error: empty coverage");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.node_count(); ++i) {
        const double center =
            std::min((static_cast<double>(profile.bin_indices()[i]) + 0.5) * profile.bin_width(),
                     spec.level_max);
        sum += std::abs(profile.lookup1(center) - actual_complexity(spec, center));
    }
    return sum / static_cast<double>(profile.node_count());
}

} // namespace flowsim
