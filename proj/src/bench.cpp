#include "sdd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sdd/rrt.hpp"

namespace sdd {

namespace {

std::vector<std::array<double, 3>> path_positions(const std::vector<StateC>& path) {
    std::vector<std::array<double, 3>> out;
    out.reserve(path.size());
    for (const auto& s : path) out.push_back({s.x, s.y, s.z});
    return out;
}

std::string num_tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

const char* model_tag(ModelKind kind) {
    return kind == ModelKind::kCar3 ? "car3" : "uav5";
}

}  // namespace

bool RunRecord::operator==(const RunRecord& o) const {
    return scenario_id == o.scenario_id && planner == o.planner && seed == o.seed &&
           success == o.success && status == o.status && wall_time == o.wall_time &&
           cost == o.cost && expansions == o.expansions &&
           subtree_expansions == o.subtree_expansions && generated == o.generated &&
           params == o.params && expansion_log == o.expansion_log && path == o.path;
}

void to_json(nlohmann::json& j, const RunRecord& r) {
    j = nlohmann::json{{"scenario_id", r.scenario_id},
                       {"planner", r.planner},
                       {"seed", r.seed},
                       {"success", r.success},
                       {"status", r.status},
                       {"wall_time", r.wall_time},
                       {"expansions", r.expansions},
                       {"subtree_expansions", r.subtree_expansions},
                       {"generated", r.generated},
                       {"params", r.params}};
    if (r.success) j["cost"] = r.cost;
    if (!r.expansion_log.empty()) j["expansion_log"] = r.expansion_log;
    if (!r.path.empty()) j["path"] = r.path;
}

void from_json(const nlohmann::json& j, RunRecord& r) {
    j.at("scenario_id").get_to(r.scenario_id);
    j.at("planner").get_to(r.planner);
    r.seed = j.value("seed", std::uint64_t{0});
    j.at("success").get_to(r.success);
    r.status = j.value("status", std::string{});
    r.wall_time = j.value("wall_time", 0.0);
    r.cost = j.value("cost", 0.0);
    r.expansions = j.value("expansions", std::uint64_t{0});
    r.subtree_expansions = j.value("subtree_expansions", std::uint64_t{0});
    r.generated = j.value("generated", std::uint64_t{0});
    r.params = j.value("params", nlohmann::json());
    r.expansion_log.clear();
    if (j.contains("expansion_log"))
        j.at("expansion_log").get_to(r.expansion_log);
    r.path.clear();
    if (j.contains("path")) j.at("path").get_to(r.path);
}

Stat stat_of(const std::vector<double>& values) {
    Stat s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    double n = static_cast<double>(values.size());
    s.sterr = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return s;
}

Aggregate aggregate_for(const std::vector<RunRecord>& records, const std::string& planner) {
    Aggregate a;
    std::vector<double> times, costs, exps;
    for (const auto& r : records) {
        if (r.planner != planner) continue;
        ++a.runs;
        if (!r.success) continue;
        ++a.successes;
        times.push_back(r.wall_time);
        costs.push_back(r.cost);
        exps.push_back(static_cast<double>(r.expansions));
    }
    if (a.runs > 0)
        a.success_rate = static_cast<double>(a.successes) / static_cast<double>(a.runs);
    a.time = stat_of(times);
    a.cost = stat_of(costs);
    a.expansions = stat_of(exps);
    return a;
}

nlohmann::json summarize(const std::vector<RunRecord>& records) {
    std::vector<std::string> planners;
    for (const auto& r : records)
        if (std::find(planners.begin(), planners.end(), r.planner) == planners.end())
            planners.push_back(r.planner);

    nlohmann::json by_planner = nlohmann::json::object();
    for (const auto& p : planners) {
        Aggregate a = aggregate_for(records, p);
        by_planner[p] = {
            {"runs", a.runs},
            {"successes", a.successes},
            {"success_rate", a.success_rate},
            {"time", {{"mean", a.time.mean}, {"sterr", a.time.sterr}}},
            {"cost", {{"mean", a.cost.mean}, {"sterr", a.cost.sterr}}},
            {"expansions", {{"mean", a.expansions.mean}, {"sterr", a.expansions.sterr}}},
        };
    }
    return nlohmann::json{{"planners", by_planner}, {"records", records.size()}};
}

namespace {

struct Job {
    std::size_t map_idx;
    std::size_t scen_idx;
    std::string planner;
    std::uint64_t seed;
};

RunRecord execute_job(const ExperimentConfig& cfg, const DynamicsModel& model,
                      const GridMap& map, const Scenario& scen, const std::string& planner,
                      std::uint64_t seed, const OverlapTable* table) {
    RunRecord rec;
    rec.scenario_id = scen.id;
    rec.planner = planner;
    rec.seed = seed;
    Solution sol;
    try {
        if (planner == "rrt") {
            RrtOptions opt;
            opt.goal_bias = cfg.goal_bias;
            opt.max_iterations = cfg.rrt_iterations;
            opt.timeout_sec = cfg.timeout_sec;
            opt.weights.theta = cfg.w_theta;
            opt.weights.v = cfg.w_v;
            opt.log_samples = cfg.log_expansions;
            rec.params = {{"mode", "rrt"},
                          {"goal_bias", opt.goal_bias},
                          {"iterations", opt.max_iterations},
                          {"timeout", opt.timeout_sec},
                          {"goal_radius", scen.goal.radius}};
            sol = plan_rrt(model, map, scen.start, scen.goal, seed, opt);
        } else {
            SearchOptions opt;
            opt.dup = cfg.make_duplicity(mode_from_name(planner));
            opt.dup.table = table;
            opt.limits.timeout_sec = cfg.timeout_sec;
            opt.limits.node_budget = cfg.node_budget;
            opt.log_expansions = cfg.log_expansions;
            rec.params = {{"mode", planner},
                          {"eps0", opt.dup.eps0},
                          {"eps_max", opt.dup.eps_max},
                          {"R", opt.dup.R},
                          {"c", opt.dup.c},
                          {"H", opt.dup.overlap.H},
                          {"r", opt.dup.overlap.r},
                          {"timeout", opt.limits.timeout_sec},
                          {"node_budget", opt.limits.node_budget},
                          {"goal_radius", scen.goal.radius}};
            sol = plan(model, map, scen.start, scen.goal, opt);
        }
    } catch (const std::exception& e) {
        rec.success = false;
        rec.status = std::string("error: ") + e.what();
        return rec;
    }
    rec.success = sol.stats.success;
    rec.status = sol.stats.status;
    rec.wall_time = sol.stats.wall_time;
    rec.cost = sol.stats.success ? sol.cost : 0.0;
    rec.expansions = sol.stats.expansions;
    rec.subtree_expansions = sol.stats.subtree_expansions;
    rec.generated = sol.stats.generated;
    rec.expansion_log = std::move(sol.expansion_log);
    if (sol.stats.success) rec.path = path_positions(sol.path);
    return rec;
}

}  // namespace

BenchResult run_benchmark(const ExperimentConfig& cfg) {
    if (cfg.map_files.empty()) throw std::runtime_error("config error: no map files");
    for (const auto& p : cfg.planners)
        if (p != "rrt") mode_from_name(p);

    DynamicsModel model = cfg.make_model();

    bool needs_table =
        std::find(cfg.planners.begin(), cfg.planners.end(), "subtree_table") !=
        cfg.planners.end();
    OverlapTable table;
    if (needs_table) {
        if (cfg.table_path.empty())
            throw std::runtime_error("config error: subtree_table planner needs a table file");
        if (!std::filesystem::exists(cfg.table_path))
            throw std::runtime_error("config error: table file '" + cfg.table_path +
                                     "' does not exist");
        table = OverlapTable::load(cfg.table_path);
        if (table.kind() != model.kind())
            throw std::runtime_error("config error: table '" + cfg.table_path +
                                     "' was built for a different dynamics model");
    }

    BenchResult out;
    std::vector<GridMap> maps;
    for (std::size_t m = 0; m < cfg.map_files.size(); ++m) {
        maps.push_back(load_map_file(cfg.map_files[m], cfg.cell_size));
        std::string name = std::filesystem::path(cfg.map_files[m]).stem().string();
        auto scens = generate_scenarios(maps.back(), model, name, cfg.scenario_count,
                                        cfg.scenario_seed + m, cfg.min_separation,
                                        cfg.effective_goal_radius());
        out.scenarios.insert(out.scenarios.end(), scens.begin(), scens.end());
    }

    std::vector<Job> jobs;
    std::size_t scen_base = 0;
    for (std::size_t m = 0; m < maps.size(); ++m) {
        for (int k = 0; k < cfg.scenario_count; ++k) {
            std::size_t si = scen_base + k;
            for (const auto& planner : cfg.planners) {
                if (planner == "rrt") {
                    for (int s = 0; s < cfg.rrt_seeds; ++s)
                        jobs.push_back({m, si,
                                        planner,
                                        cfg.rrt_seed_base +
                                            static_cast<std::uint64_t>(si) * cfg.rrt_seeds + s});
                } else {
                    jobs.push_back({m, si, planner, 0});
                }
            }
        }
        scen_base += cfg.scenario_count;
    }

    out.records.resize(jobs.size());
    const OverlapTable* table_ptr = needs_table ? &table : nullptr;
    auto run_one = [&](std::size_t i) {
        const Job& job = jobs[i];
        out.records[i] = execute_job(cfg, model, maps[job.map_idx], out.scenarios[job.scen_idx],
                                     job.planner, job.seed, table_ptr);
    };

    int workers = std::min<int>(cfg.jobs, static_cast<int>(jobs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : pool) t.join();
    }

    out.summary = summarize(out.records);
    return out;
}

EnsuredTable ensure_table(const DynamicsModel& model, const OverlapParams& params,
                          const std::string& dir, int threads) {
    OverlapParams want = params;
    if (want.resolutions.empty()) want.resolutions = default_resolutions(model.kind());

    std::filesystem::create_directories(dir);
    EnsuredTable out;
    out.path = (std::filesystem::path(dir) /
                (std::string("sovt_") + model_tag(model.kind()) + "_H" +
                 std::to_string(want.H) + "_r" + num_tag(want.r) + "_R" + num_tag(want.R) +
                 ".sovt"))
                   .string();

    if (std::filesystem::exists(out.path)) {
        try {
            OverlapTable cached = OverlapTable::load(out.path);
            const OverlapParams& got = cached.params();
            if (cached.kind() == model.kind() && got.H == want.H && got.r == want.r &&
                got.R == want.R && got.resolutions == want.resolutions &&
                got.full_state_overlap == want.full_state_overlap) {
                out.table = std::move(cached);
                return out;
            }
        } catch (const std::exception&) {
            // unreadable or stale file: fall through and rebuild
        }
    }
    out.table = precompute_table(model, want, threads);
    out.table.save(out.path);
    out.rebuilt = true;
    return out;
}

SweepResult run_sensitivity(const ExperimentConfig& cfg) {
    if (cfg.sweep_H.empty() || cfg.sweep_r.empty() || cfg.sweep_c.empty())
        throw std::runtime_error("config error: empty sweep grid");

    DynamicsModel model = cfg.make_model();
    bool needs_table =
        std::find(cfg.planners.begin(), cfg.planners.end(), "subtree_table") !=
        cfg.planners.end();
    std::string table_dir = (std::filesystem::path(cfg.out_dir) / "tables").string();

    SweepResult out;
    for (int H : cfg.sweep_H) {
        for (double r : cfg.sweep_r) {
            ExperimentConfig point = cfg;
            point.H = H;
            point.r = r;
            if (needs_table) {
                OverlapParams op = cfg.make_duplicity(DuplicityMode::kSubtreeTable).overlap;
                op.H = H;
                op.r = r;
                point.table_path = ensure_table(model, op, table_dir).path;
            }
            for (double c : cfg.sweep_c) {
                point.c = c;
                BenchResult bench = run_benchmark(point);
                for (const auto& planner : cfg.planners) {
                    SweepPoint sp;
                    sp.H = H;
                    sp.r = r;
                    sp.c = c;
                    sp.planner = planner;
                    sp.stats = aggregate_for(bench.records, planner);
                    out.points.push_back(sp);
                }
                out.records.insert(out.records.end(), bench.records.begin(),
                                   bench.records.end());
            }
        }
    }
    return out;
}

void write_records_jsonl(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& r : records) {
        nlohmann::json j = r;
        outf << j.dump() << '\n';
    }
}

std::vector<RunRecord> read_records_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::vector<RunRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(nlohmann::json::parse(line).get<RunRecord>());
    }
    return out;
}

namespace {

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

}  // namespace

void write_records_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot write '" + path + "'");
    outf << "scenario_id,planner,seed,success,status,wall_time,cost,expansions,"
            "subtree_expansions,generated\n";
    for (const auto& r : records) {
        outf << csv_safe(r.scenario_id) << ',' << r.planner << ',' << r.seed << ','
             << (r.success ? 1 : 0) << ',' << csv_safe(r.status) << ',' << r.wall_time << ',';
        if (r.success) outf << r.cost;
        outf << ',' << r.expansions << ',' << r.subtree_expansions << ',' << r.generated
             << '\n';
    }
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot write '" + path + "'");
    outf << "H,r,c,planner,runs,successes,success_rate,mean_time,sterr_time,"
            "mean_cost,sterr_cost,mean_expansions,sterr_expansions\n";
    for (const auto& p : sweep.points) {
        outf << p.H << ',' << p.r << ',' << p.c << ',' << p.planner << ',' << p.stats.runs
             << ',' << p.stats.successes << ',' << p.stats.success_rate << ','
             << p.stats.time.mean << ',' << p.stats.time.sterr << ',' << p.stats.cost.mean
             << ',' << p.stats.cost.sterr << ',' << p.stats.expansions.mean << ','
             << p.stats.expansions.sterr << '\n';
    }
}

}  // namespace sdd
