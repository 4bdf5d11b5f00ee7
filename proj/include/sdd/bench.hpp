#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdd/config.hpp"
#include "sdd/overlap_table.hpp"
#include "sdd/scenario.hpp"
#include "sdd/search.hpp"

namespace sdd {

/// Outcome of one planner on one scenario. `cost` is meaningful only on
/// success and is omitted from the JSON form otherwise.
struct RunRecord {
    std::string scenario_id;
    std::string planner;
    std::uint64_t seed = 0;  // 0 for the deterministic searches
    bool success = false;
    std::string status;
    double wall_time = 0.0;
    double cost = 0.0;
    std::uint64_t expansions = 0;
    std::uint64_t subtree_expansions = 0;
    std::uint64_t generated = 0;
    nlohmann::json params;
    std::vector<std::array<double, 3>> expansion_log;  // expanded (RRT: added) states
    std::vector<std::array<double, 3>> path;           // solution positions

    bool operator==(const RunRecord& o) const;
};

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

/// Mean and standard error (n-1 sample variance over sqrt(n); 0 when
/// n < 2) of one statistic over successful runs.
struct Stat {
    double mean = 0.0;
    double sterr = 0.0;
};
Stat stat_of(const std::vector<double>& values);

/// Per-planner aggregate over a record set.
struct Aggregate {
    std::size_t runs = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    Stat time;
    Stat cost;
    Stat expansions;
};

/// Aggregates grouped by planner name, JSON-shaped for summary output.
nlohmann::json summarize(const std::vector<RunRecord>& records);
Aggregate aggregate_for(const std::vector<RunRecord>& records, const std::string& planner);

struct BenchResult {
    std::vector<Scenario> scenarios;
    std::vector<RunRecord> records;
    nlohmann::json summary;
};

/// Runs every configured planner on every generated scenario. Record
/// order is canonical (map, scenario, planner, seed) regardless of the
/// worker count. Requires an existing table file when any planner needs
/// one.
BenchResult run_benchmark(const ExperimentConfig& config);

/// Precomputed-table cache: loads `dir`/sovt_<model>_H<H>_r<r>_R<R>.sovt
/// when its header matches the requested parameters, rebuilds and saves
/// it otherwise.
struct EnsuredTable {
    std::string path;
    bool rebuilt = false;
    OverlapTable table;
};
EnsuredTable ensure_table(const DynamicsModel& model, const OverlapParams& params,
                          const std::string& dir, int threads = 0);

/// One (H, r, c) grid point of a sensitivity sweep.
struct SweepPoint {
    int H = 0;
    double r = 0.0;
    double c = 0.0;
    std::string planner;
    Aggregate stats;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<RunRecord> records;
};

/// Benchmarks every (H, r, c) combination from the config's sweep lists,
/// reusing cached tables (c needs no rebuild; it only affects queries).
SweepResult run_sensitivity(const ExperimentConfig& config);

// Artifact writers. JSONL holds one RunRecord per line.
void write_records_jsonl(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_records_jsonl(const std::string& path);
void write_records_csv(const std::vector<RunRecord>& records, const std::string& path);
void write_sweep_csv(const SweepResult& sweep, const std::string& path);

}  // namespace sdd
