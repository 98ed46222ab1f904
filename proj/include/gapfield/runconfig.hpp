#pragma once

#include <gapfield/vec2.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace gapfield {

/// Flat run configuration shared by all subcommands. Parsed from a
/// `key = value` config file (one pair per line, # comments) with
/// command-line flags overriding.
struct RunConfig {
    double epsilon = 0.1;
    std::vector<double> eps_list;
    double p2 = 0.0;
    double a1 = 1.0, a2 = 0.0;
    std::string solver = "both"; // bem | series | both
    int nodes = 0;               // 0: schedule
    uint64_t seed = 1;
    std::string out;
    std::vector<std::string> only;
    Vec2 probe{0.0, 0.3};
    int grid_n = 41;
    double grid_x1min = -0.5, grid_x1max = 0.5;
    double grid_x2min = -0.5, grid_x2max = 0.5;
    bool record = false;
    int threads = 0; // 0: hardware default, capped by GAPFIELD_THREADS

    bool operator==(const RunConfig&) const = default;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse a config file; throws ConfigError on unknown keys or bad values.
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
/// Apply one key=value assignment.
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

nlohmann::ordered_json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

/// Validation shared by the commands: module-level preconditions checked
/// before any solve starts.
void validate(const RunConfig& cfg);

} // namespace gapfield
