#include "sdd/config.hpp"

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sdd/grid_map.hpp"  // ParseError

namespace sdd {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError(line, "not a number: '" + v + "'");
    }
}

std::int64_t to_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ParseError(line, "not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError(line, "not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_double_list(const std::string& v, int line) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(item, line));
    return out;
}

std::vector<int> to_int_list(const std::string& v, int line) {
    std::vector<int> out;
    for (const auto& item : split_list(v))
        out.push_back(static_cast<int>(to_int(item, line)));
    return out;
}

}  // namespace

DynamicsModel ExperimentConfig::make_model() const {
    if (model == "car3") return DynamicsModel::car3(car);
    if (model == "uav5") return DynamicsModel::uav5(uav);
    throw std::invalid_argument("unknown dynamics model '" + model + "'");
}

DuplicityParams ExperimentConfig::make_duplicity(DuplicityMode mode) const {
    DuplicityParams d;
    d.mode = mode;
    d.R = R;
    d.c = c;
    d.eps0 = eps0;
    d.eps_max = eps_max;
    d.weights.theta = w_theta;
    d.weights.v = w_v;
    d.overlap.H = H;
    d.overlap.r = r;
    d.overlap.R = R;
    d.overlap.full_state_overlap = full_state_overlap;
    d.overlap.weights = d.weights;
    d.overlap.resolutions = resolutions.empty()
                                ? default_resolutions(make_model().kind())
                                : resolutions;
    return d;
}

DuplicityMode mode_from_name(const std::string& name) {
    if (name == "none") return DuplicityMode::kNone;
    if (name == "euclidean") return DuplicityMode::kEuclidean;
    if (name == "subtree_online") return DuplicityMode::kSubtreeOnline;
    if (name == "subtree_table") return DuplicityMode::kSubtreeTable;
    throw std::invalid_argument("unknown duplicity mode '" + name + "'");
}

std::string mode_name(DuplicityMode mode) {
    switch (mode) {
        case DuplicityMode::kNone: return "none";
        case DuplicityMode::kEuclidean: return "euclidean";
        case DuplicityMode::kSubtreeOnline: return "subtree_online";
        case DuplicityMode::kSubtreeTable: return "subtree_table";
    }
    throw std::invalid_argument("bad duplicity mode");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::size_t comment = raw.find_first_of("#;");
        if (comment != std::string::npos) raw = raw.substr(0, comment);
        std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "map" && section != "dynamics" && section != "duplicity" &&
                section != "scenarios" && section != "run" && section != "sweep" &&
                section != "output") {
                throw ParseError(line, "unknown section [" + section + "]");
            }
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "empty key");
        if (section.empty()) throw ParseError(line, "key outside any section");

        bool known = true;
        if (section == "map") {
            if (key == "files") cfg.map_files = split_list(val);
            else if (key == "cell_size") cfg.cell_size = to_double(val, line);
            else known = false;
        } else if (section == "dynamics") {
            if (key == "model") cfg.model = val;
            else if (key == "speed") cfg.car.speed = to_double(val, line);
            else if (key == "turn_radius") cfg.car.turn_radius = to_double(val, line);
            else if (key == "v_min") cfg.uav.v_min = to_double(val, line);
            else if (key == "v_max") cfg.uav.v_max = to_double(val, line);
            else if (key == "a_max") cfg.uav.a_max = to_double(val, line);
            else if (key == "vz_max") cfg.uav.vz_max = to_double(val, line);
            else if (key == "omega_max") cfg.uav.omega_max = to_double(val, line);
            else if (key == "duration") {
                cfg.car.primitive_duration = to_double(val, line);
                cfg.uav.primitive_duration = cfg.car.primitive_duration;
            } else if (key == "substep") {
                cfg.car.substep = to_double(val, line);
                cfg.uav.substep = cfg.car.substep;
            } else known = false;
        } else if (section == "duplicity") {
            if (key == "eps0") cfg.eps0 = to_double(val, line);
            else if (key == "eps_max") cfg.eps_max = to_double(val, line);
            else if (key == "R") cfg.R = to_double(val, line);
            else if (key == "c") cfg.c = to_double(val, line);
            else if (key == "H") cfg.H = static_cast<int>(to_int(val, line));
            else if (key == "r") cfg.r = to_double(val, line);
            else if (key == "resolutions") cfg.resolutions = to_double_list(val, line);
            else if (key == "full_state_overlap") cfg.full_state_overlap = to_bool(val, line);
            else if (key == "w_theta") cfg.w_theta = to_double(val, line);
            else if (key == "w_v") cfg.w_v = to_double(val, line);
            else if (key == "table") cfg.table_path = val;
            else known = false;
        } else if (section == "scenarios") {
            if (key == "count") cfg.scenario_count = static_cast<int>(to_int(val, line));
            else if (key == "seed") cfg.scenario_seed = static_cast<std::uint64_t>(to_int(val, line));
            else if (key == "min_separation") cfg.min_separation = to_double(val, line);
            else if (key == "goal_radius") cfg.goal_radius = to_double(val, line);
            else known = false;
        } else if (section == "run") {
            if (key == "planners") cfg.planners = split_list(val);
            else if (key == "timeout") cfg.timeout_sec = to_double(val, line);
            else if (key == "node_budget") cfg.node_budget = static_cast<std::uint64_t>(to_int(val, line));
            else if (key == "rrt_seeds") cfg.rrt_seeds = static_cast<int>(to_int(val, line));
            else if (key == "rrt_seed_base") cfg.rrt_seed_base = static_cast<std::uint64_t>(to_int(val, line));
            else if (key == "goal_bias") cfg.goal_bias = to_double(val, line);
            else if (key == "rrt_iterations") cfg.rrt_iterations = static_cast<std::uint64_t>(to_int(val, line));
            else if (key == "log_expansions") cfg.log_expansions = to_bool(val, line);
            else if (key == "jobs") cfg.jobs = static_cast<int>(to_int(val, line));
            else known = false;
        } else if (section == "sweep") {
            if (key == "H") cfg.sweep_H = to_int_list(val, line);
            else if (key == "r") cfg.sweep_r = to_double_list(val, line);
            else if (key == "c") cfg.sweep_c = to_double_list(val, line);
            else known = false;
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else known = false;
        }
        if (!known)
            throw ParseError(line, "unknown key '" + key + "' in section [" + section + "]");
    }

    // Fail fast on nonsense that would otherwise surface mid-run.
    if (cfg.cell_size <= 0.0) throw std::invalid_argument("cell_size must be positive");
    if (cfg.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    if (cfg.rrt_seeds < 1) throw std::invalid_argument("rrt_seeds must be >= 1");
    for (const auto& p : cfg.planners) {
        if (p != "rrt") mode_from_name(p);  // throws on unknown planner names
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace sdd
