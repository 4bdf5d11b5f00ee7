#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdd/duplicity.hpp"
#include "sdd/dynamics.hpp"

namespace sdd {

/// Experiment description parsed from an INI-style text file:
/// [section] headers, key = value lines, '#' or ';' comments, and
/// comma-separated lists. Unknown sections or keys are errors.
struct ExperimentConfig {
    // [map]
    std::vector<std::string> map_files;
    double cell_size = 1.0;

    // [dynamics]
    std::string model = "car3";
    Car3Params car{};
    Uav5Params uav{};

    // [duplicity]
    double eps0 = 1.0;
    double eps_max = 2.0;
    double R = 10.0;
    double c = 0.25;
    int H = 2;
    double r = 0.25;
    std::vector<double> resolutions;  // empty = model defaults
    bool full_state_overlap = false;
    double w_theta = 1.0;
    double w_v = 1.0;
    std::string table_path;

    // [scenarios]
    int scenario_count = 10;
    std::uint64_t scenario_seed = 1;
    double min_separation = 10.0;
    double goal_radius = -1.0;  // negative = 0.5 * cell_size

    // [run]
    std::vector<std::string> planners{"subtree_table"};
    double timeout_sec = 120.0;
    std::uint64_t node_budget = 5'000'000;
    int rrt_seeds = 1;
    std::uint64_t rrt_seed_base = 1000;
    double goal_bias = 0.05;
    std::uint64_t rrt_iterations = 200'000;
    bool log_expansions = false;
    int jobs = 1;

    // [sweep]
    std::vector<int> sweep_H{1, 2};
    std::vector<double> sweep_r{0.1, 0.25, 0.5};
    std::vector<double> sweep_c{0.0, 0.25, 0.5, 0.75};

    // [output]
    std::string out_dir = "out";

    DynamicsModel make_model() const;
    DuplicityParams make_duplicity(DuplicityMode mode) const;
    double effective_goal_radius() const {
        return goal_radius >= 0.0 ? goal_radius : 0.5 * cell_size;
    }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

DuplicityMode mode_from_name(const std::string& name);
std::string mode_name(DuplicityMode mode);

}  // namespace sdd
