#ifndef FLOWSIM_IO_HPP
#define FLOWSIM_IO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowsim/mining.hpp"

namespace flowsim {

/// Shortest round-trip decimal rendering of a double (std::to_chars), so a
/// fixed seed always yields byte-identical CSV output.
std::string format_double(double v);

/// Profile CSV: a `# bin_width=...` comment line, then the exact header
/// `bin_center,complexity` (or `bin_center,c1,...,ck` for k > 1) and one row
/// per covered bin.
void write_profile_csv(const ComplexityProfile& profile, const std::filesystem::path& path);
ComplexityProfile read_profile_csv(const std::filesystem::path& path);

/// Mined-versus-actual comparison CSV with header `bin_center,mined,actual`,
/// one row per bin of [0, level_max] (centers clamped to level_max).
/// Requires ability_dim == 1.
void write_profile_comparison_csv(const ComplexityProfile& profile, const EnvironmentSpec& spec,
                                  const std::filesystem::path& path);

/// Audit dump of a raw ability log: header `level_bin,ability,reached_goal`,
/// one row per recorded sample with the bin's lower-edge level. Components
/// of multi-dimensional abilities are joined with `;`.
void write_ability_log_csv(const AbilityLog& log, const std::filesystem::path& path);

/// Trajectory CSV with header `t,level,ability,status`; the status field is
/// empty on all rows except the last, which carries dead|goal|alive.
void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path);

/// Ground-truth complexity curve for plot overlays: header `level,complexity`.
void write_curve_csv(const EnvironmentSpec& spec, const std::filesystem::path& path,
                     int points = 401);

struct ResultRow {
    std::string env;
    std::string agent;
    std::optional<double> alpha;
    std::int64_t trials = 0;
    double mean_return = 0.0;
    double std_error = 0.0;
};

/// Results CSV with header `env,agent,alpha,trials,mean_return,std_error`;
/// the alpha field is empty for agents without one.
void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// Per-trial returns CSV with header `trial,return`.
void write_returns_csv(const std::vector<double>& returns, const std::filesystem::path& path);

/// Flat key = value configuration file. `#` starts a comment; blank lines are
/// skipped. Throws std::runtime_error on malformed lines.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

} // namespace flowsim

#endif
