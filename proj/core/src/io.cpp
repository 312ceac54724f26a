#include "flowsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flowsim {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::runtime_error(std::string("failed to parse ") + what + ": '" + s + "'");
    }
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void write_profile_csv(const ComplexityProfile& profile, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# bin_width=" << format_double(profile.bin_width()) << "\n";
    if (profile.ability_dim() == 1) {
        out << "bin_center,complexity\n";
    } else {
        out << "bin_center";
        for (int c = 1; c <= profile.ability_dim(); ++c) {
            out << ",c" << c;
        }
        out << "\n";
    }
    for (std::size_t i = 0; i < profile.node_count(); ++i) {
        const double center =
            (static_cast<double>(profile.bin_indices()[i]) + 0.5) * profile.bin_width();
        out << format_double(center);
        const AbilityVector v = profile.node_value(i);
        for (double x : v) {
            out << ',' << format_double(x);
        }
        out << "\n";
    }
}

ComplexityProfile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open profile CSV: " + path.string());
    }
    std::string line;
    double bin_width = 0.0;
    bool have_width = false;
    bool have_header = false;
    int dim = 0;
    std::vector<std::int64_t> bins;
    std::vector<double> values;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t[0] == '#') {
            const auto pos = t.find("bin_width=");
            if (pos != std::string::npos) {
                bin_width = parse_double(trim(t.substr(pos + 10)), "bin_width");
                have_width = true;
            }
            continue;
        }
        if (!have_header) {
            const auto fields = split_csv(t);
            if (fields.empty() || fields[0] != "bin_center") {
                throw std::runtime_error("profile CSV: unexpected header");
            }
            dim = static_cast<int>(fields.size()) - 1;
            have_header = true;
            continue;
        }
        const auto fields = split_csv(t);
        if (static_cast<int>(fields.size()) != dim + 1) {
            throw std::runtime_error("profile CSV: wrong field count");
        }
        if (!have_width) {
            throw std::runtime_error("profile CSV: data row before the bin_width comment");
        }
        const double center = parse_double(fields[0], "bin_center");
        bins.push_back(static_cast<std::int64_t>(std::llround(center / bin_width - 0.5)));
        for (int c = 1; c <= dim; ++c) {
            values.push_back(parse_double(fields[static_cast<std::size_t>(c)], "complexity"));
        }
    }
    if (!have_width || !have_header) {
        throw std::runtime_error("profile CSV: missing bin_width comment or header");
    }
    return ComplexityProfile(bin_width, dim, std::move(bins), std::move(values));
}

void write_profile_comparison_csv(const ComplexityProfile& profile, const EnvironmentSpec& spec,
                                  const std::filesystem::path& path) {
    if (profile.ability_dim() != 1) {
        throw std::invalid_argument("write_profile_comparison_csv: requires ability_dim == 1");
    }
    auto out = open_out(path);
    out << "bin_center,mined,actual\n";
    const double w = profile.bin_width();
    const auto last_bin = static_cast<std::int64_t>(std::floor(spec.level_max / w));
    for (std::int64_t b = 0; b <= last_bin; ++b) {
        const double center = std::min((static_cast<double>(b) + 0.5) * w, spec.level_max);
        out << format_double(center) << ',' << format_double(profile.lookup1(center)) << ','
            << format_double(actual_complexity(spec, center)) << "\n";
    }
}

void write_ability_log_csv(const AbilityLog& log, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "level_bin,ability,reached_goal\n";
    const auto k = static_cast<std::size_t>(log.ability_dim());
    for (const auto& [index, bin] : log.bins()) {
        const double edge = static_cast<double>(index) * log.bin_width();
        for (std::size_t s = 0; s < bin.sample_count(); ++s) {
            out << format_double(edge) << ',';
            for (std::size_t c = 0; c < k; ++c) {
                if (c > 0) out << ';';
                out << format_double(bin.abilities[s * k + c]);
            }
            out << ',' << (bin.reached_goal[s] ? 1 : 0) << "\n";
        }
    }
}

void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "t,level,ability,status\n";
    const std::int64_t n = trajectory.sample_count();
    for (std::int64_t t = 0; t < n; ++t) {
        out << t << ',' << format_double(trajectory.level_at(t)) << ',';
        for (int c = 0; c < trajectory.ability_dim; ++c) {
            if (c > 0) out << ';';
            out << format_double(trajectory.ability_at(t, c));
        }
        out << ',';
        if (t == n - 1) {
            out << to_string(trajectory.terminal);
        }
        out << "\n";
    }
}

void write_curve_csv(const EnvironmentSpec& spec, const std::filesystem::path& path, int points) {
    auto out = open_out(path);
    out << "level,complexity\n";
    for (int i = 0; i < points; ++i) {
        const double level = spec.level_max * static_cast<double>(i) /
                             static_cast<double>(points - 1);
        out << format_double(level) << ',' << format_double(actual_complexity(spec, level))
            << "\n";
    }
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "env,agent,alpha,trials,mean_return,std_error\n";
    for (const auto& r : rows) {
        out << r.env << ',' << r.agent << ',';
        if (r.alpha) {
            out << format_double(*r.alpha);
        }
        out << ',' << r.trials << ',' << format_double(r.mean_return) << ','
            << format_double(r.std_error) << "\n";
    }
}

void write_returns_csv(const std::vector<double>& returns, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "trial,return\n";
    for (std::size_t i = 0; i < returns.size(); ++i) {
        out << i << ',' << format_double(returns[i]) << "\n";
    }
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path.string());
    }
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

} // namespace flowsim
