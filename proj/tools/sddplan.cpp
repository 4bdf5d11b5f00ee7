#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdd/bench.hpp"
#include "sdd/config.hpp"
#include "sdd/pgm.hpp"

namespace {

using sdd::ExperimentConfig;

ExperimentConfig load_config(const std::string& path) {
    return sdd::parse_config_file(path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

void print_summary(const nlohmann::json& summary) {
    for (const auto& [name, agg] : summary.at("planners").items()) {
        std::printf("%-16s success %zu/%zu  time %.3fs ± %.3f  cost %.2f ± %.2f  "
                    "expansions %.0f ± %.0f\n",
                    name.c_str(), agg.at("successes").get<std::size_t>(),
                    agg.at("runs").get<std::size_t>(),
                    agg.at("time").at("mean").get<double>(),
                    agg.at("time").at("sterr").get<double>(),
                    agg.at("cost").at("mean").get<double>(),
                    agg.at("cost").at("sterr").get<double>(),
                    agg.at("expansions").at("mean").get<double>(),
                    agg.at("expansions").at("sterr").get<double>());
    }
}

nlohmann::json scenario_json(const sdd::Scenario& s) {
    return {{"id", s.id},
            {"map", s.map_name},
            {"start", {s.start.x, s.start.y, s.start.z, s.start.theta, s.start.v}},
            {"goal",
             {{"center", {s.goal.center[0], s.goal.center[1], s.goal.center[2]}},
              {"radius", s.goal.radius}}}};
}

int cmd_precompute(const std::string& config_path, const std::string& out_path, int threads) {
    ExperimentConfig cfg = load_config(config_path);
    sdd::DynamicsModel model = cfg.make_model();
    sdd::OverlapParams params = cfg.make_duplicity(sdd::DuplicityMode::kSubtreeTable).overlap;

    std::string path = !out_path.empty() ? out_path : cfg.table_path;
    if (path.empty()) throw std::runtime_error("no output path: pass -o or set [duplicity] table");

    auto t0 = std::chrono::steady_clock::now();
    sdd::OverlapTable table = sdd::precompute_table(model, params, threads);
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    table.save(path);
    std::printf("wrote %s: %llu entries, H=%d r=%g R=%g (%.1fs)\n", path.c_str(),
                static_cast<unsigned long long>(table.entry_count()), params.H, params.r,
                params.R, dt.count());
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir_flag) {
    ExperimentConfig cfg = load_config(config_path);
    if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
    std::filesystem::create_directories(cfg.out_dir);

    sdd::BenchResult result = sdd::run_benchmark(cfg);

    auto out = [&](const char* name) {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    };
    sdd::write_records_jsonl(result.records, out("records.jsonl"));
    sdd::write_records_csv(result.records, out("records.csv"));
    write_text(out("summary.json"), result.summary.dump(2) + "\n");
    nlohmann::json scens = nlohmann::json::array();
    for (const auto& s : result.scenarios) scens.push_back(scenario_json(s));
    write_text(out("scenarios.json"), scens.dump(2) + "\n");

    print_summary(result.summary);
    std::printf("wrote %zu records to %s\n", result.records.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir_flag) {
    ExperimentConfig cfg = load_config(config_path);
    if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
    std::filesystem::create_directories(cfg.out_dir);

    sdd::SweepResult sweep = sdd::run_sensitivity(cfg);

    auto out = [&](const char* name) {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    };
    sdd::write_sweep_csv(sweep, out("sweep.csv"));
    sdd::write_records_jsonl(sweep.records, out("sweep_records.jsonl"));
    for (const auto& p : sweep.points)
        std::printf("H=%d r=%-5g c=%-5g %-16s success %zu/%zu  time %.3fs ± %.3f\n", p.H, p.r,
                    p.c, p.planner.c_str(), p.stats.successes, p.stats.runs, p.stats.time.mean,
                    p.stats.time.sterr);
    std::printf("wrote %zu sweep points, %zu records to %s\n", sweep.points.size(),
                sweep.records.size(), cfg.out_dir.c_str());
    return 0;
}

int cmd_heatmap(const std::string& map_path, double cell_size, const std::string& records_path,
                const std::string& scenario_id, const std::string& planner,
                std::uint64_t seed, const std::string& out_path) {
    sdd::GridMap map = sdd::load_map_file(map_path, cell_size);
    std::vector<sdd::RunRecord> records = sdd::read_records_jsonl(records_path);
    for (const auto& r : records) {
        if (r.scenario_id != scenario_id || r.planner != planner) continue;
        if (seed != 0 && r.seed != seed) continue;
        sdd::write_pgm(sdd::render_heatmap(map, r), out_path);
        std::printf("wrote %s (%dx%d)\n", out_path.c_str(), map.width, map.height);
        return 0;
    }
    throw std::runtime_error("no record matches scenario '" + scenario_id + "' planner '" +
                             planner + "'");
}

int cmd_scenarios(const std::string& config_path, const std::string& out_path) {
    ExperimentConfig cfg = load_config(config_path);
    sdd::DynamicsModel model = cfg.make_model();
    nlohmann::json all = nlohmann::json::array();
    for (std::size_t m = 0; m < cfg.map_files.size(); ++m) {
        sdd::GridMap map = sdd::load_map_file(cfg.map_files[m], cfg.cell_size);
        std::string name = std::filesystem::path(cfg.map_files[m]).stem().string();
        auto scens = sdd::generate_scenarios(map, model, name, cfg.scenario_count,
                                             cfg.scenario_seed + m, cfg.min_separation,
                                             cfg.effective_goal_radius());
        for (const auto& s : scens) all.push_back(scenario_json(s));
    }
    std::string path = out_path.empty()
                           ? (std::filesystem::path(cfg.out_dir) / "scenarios.json").string()
                           : out_path;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path().empty()
                                            ? "."
                                            : std::filesystem::path(path).parent_path().string());
    write_text(path, all.dump(2) + "\n");
    std::printf("wrote %zu scenarios to %s\n", all.size(), path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"motion-planning benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, out_path, out_dir;
    int threads = 0;

    auto* precompute = app.add_subcommand("precompute", "build and save an overlap table");
    precompute->add_option("-c,--config", config_path, "experiment config")->required();
    precompute->add_option("-o,--output", out_path, "table file (default: [duplicity] table)");
    precompute->add_option("-j,--threads", threads, "worker threads (0 = hardware)");

    auto* bench = app.add_subcommand("bench", "run every planner on every scenario");
    bench->add_option("-c,--config", config_path, "experiment config")->required();
    bench->add_option("-o,--out-dir", out_dir, "output directory (default from config)");

    auto* sweep = app.add_subcommand("sweep", "sensitivity sweep over H, r, c");
    sweep->add_option("-c,--config", config_path, "experiment config")->required();
    sweep->add_option("-o,--out-dir", out_dir, "output directory (default from config)");

    std::string map_path, records_path, scenario_id, planner = "subtree_table";
    double cell_size = 1.0;
    std::uint64_t seed = 0;
    auto* heatmap = app.add_subcommand("heatmap", "render expansion density of one run");
    heatmap->add_option("-m,--map", map_path, "map file")->required();
    heatmap->add_option("--cell-size", cell_size, "cell size for .map files");
    heatmap->add_option("-r,--records", records_path, "records.jsonl from bench")->required();
    heatmap->add_option("-s,--scenario", scenario_id, "scenario id")->required();
    heatmap->add_option("-p,--planner", planner, "planner name");
    heatmap->add_option("--seed", seed, "seed to match (0 = first)");
    heatmap->add_option("-o,--output", out_path, "output .pgm")->required();

    auto* scenarios = app.add_subcommand("scenarios", "generate and save scenarios");
    scenarios->add_option("-c,--config", config_path, "experiment config")->required();
    scenarios->add_option("-o,--output", out_path, "output json (default: out dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (precompute->parsed()) return cmd_precompute(config_path, out_path, threads);
        if (bench->parsed()) return cmd_bench(config_path, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
        if (heatmap->parsed())
            return cmd_heatmap(map_path, cell_size, records_path, scenario_id, planner, seed,
                               out_path);
        if (scenarios->parsed()) return cmd_scenarios(config_path, out_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
