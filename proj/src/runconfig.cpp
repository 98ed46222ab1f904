#include <gapfield/runconfig.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace gapfield {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(std::stod(trim(item)));
    return out;
}

std::vector<std::string> parse_string_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

} // namespace

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "epsilon") cfg.epsilon = std::stod(value);
        else if (key == "eps_list") cfg.eps_list = parse_double_list(value);
        else if (key == "p") cfg.p2 = std::stod(value);
        else if (key == "a") {
            const auto v = parse_double_list(value);
            if (v.size() != 2) throw ConfigError("a needs two components");
            cfg.a1 = v[0];
            cfg.a2 = v[1];
        } else if (key == "solver") {
            if (value != "bem" && value != "series" && value != "both")
                throw ConfigError("solver must be bem, series or both");
            cfg.solver = value;
        } else if (key == "nodes") cfg.nodes = std::stoi(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "out") cfg.out = value;
        else if (key == "only") cfg.only = parse_string_list(value);
        else if (key == "probe") {
            const auto v = parse_double_list(value);
            if (v.size() != 2) throw ConfigError("probe needs two components");
            cfg.probe = {v[0], v[1]};
        } else if (key == "grid_n") cfg.grid_n = std::stoi(value);
        else if (key == "grid_box") {
            const auto v = parse_double_list(value);
            if (v.size() != 4) throw ConfigError("grid_box needs four numbers");
            cfg.grid_x1min = v[0];
            cfg.grid_x1max = v[1];
            cfg.grid_x2min = v[2];
            cfg.grid_x2max = v[3];
        } else if (key == "record") cfg.record = (value == "true" || value == "1");
        else if (key == "threads") cfg.threads = std::stoi(value);
        else throw ConfigError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for key " + key + ": " + value);
    } catch (const std::out_of_range&) {
        throw ConfigError("value out of range for key " + key + ": " + value);
    }
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_key_value(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return base;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["epsilon"] = c.epsilon;
    j["eps_list"] = c.eps_list;
    j["p"] = c.p2;
    j["a"] = {c.a1, c.a2};
    j["solver"] = c.solver;
    j["nodes"] = c.nodes;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["only"] = c.only;
    j["probe"] = {c.probe.x, c.probe.y};
    j["grid_n"] = c.grid_n;
    j["grid_box"] = {c.grid_x1min, c.grid_x1max, c.grid_x2min, c.grid_x2max};
    j["record"] = c.record;
    j["threads"] = c.threads;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.epsilon = j.at("epsilon").get<double>();
    c.eps_list = j.at("eps_list").get<std::vector<double>>();
    c.p2 = j.at("p").get<double>();
    c.a1 = j.at("a")[0].get<double>();
    c.a2 = j.at("a")[1].get<double>();
    c.solver = j.at("solver").get<std::string>();
    c.nodes = j.at("nodes").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.out = j.at("out").get<std::string>();
    c.only = j.at("only").get<std::vector<std::string>>();
    c.probe = {j.at("probe")[0].get<double>(), j.at("probe")[1].get<double>()};
    c.grid_n = j.at("grid_n").get<int>();
    c.grid_x1min = j.at("grid_box")[0].get<double>();
    c.grid_x1max = j.at("grid_box")[1].get<double>();
    c.grid_x2min = j.at("grid_box")[2].get<double>();
    c.grid_x2max = j.at("grid_box")[3].get<double>();
    c.record = j.at("record").get<bool>();
    c.threads = j.at("threads").get<int>();
    return c;
}

void validate(const RunConfig& c) {
    auto check_eps = [](double e) {
        if (!(e > 0.0) || e > 0.5)
            throw ConfigError("epsilon must lie in (0, 0.5], got " + std::to_string(e));
    };
    check_eps(c.epsilon);
    for (double e : c.eps_list) check_eps(e);
    const double an = std::sqrt(c.a1 * c.a1 + c.a2 * c.a2);
    if (an == 0.0) throw ConfigError("dipole direction a must be nonzero");
    if (!(std::abs(c.p2) < 0.5)) throw ConfigError("|p| must be < 1/2");
    if (c.nodes != 0 && (c.nodes < 64 || c.nodes % 2 != 0))
        throw ConfigError("nodes must be an even count >= 64");
    if (c.grid_n < 2) throw ConfigError("grid_n must be >= 2");
}

} // namespace gapfield
