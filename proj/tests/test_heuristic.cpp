#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sdd/distance_field.hpp"
#include "sdd/grid_map.hpp"

using namespace sdd;

namespace {

GridMap random_map(std::mt19937& rng, int w, int h, double block_prob) {
    GridMap m;
    m.width = w;
    m.height = h;
    m.cell_size = 1.0;
    m.blocked.assign(m.cell_count(), 0);
    std::bernoulli_distribution blocked(block_prob);
    for (auto& b : m.blocked) b = blocked(rng) ? 1 : 0;
    return m;
}

}  // namespace

TEST_CASE("field values around the goal") {
    GridMap m;
    m.width = 5;
    m.height = 5;
    m.cell_size = 2.0;
    m.blocked.assign(m.cell_count(), 0);

    DistanceField f = build_distance_field(m, {5.0, 5.0, 0.0});  // cell (2,2)
    CHECK(f.at(2, 2, 0) == 0.0);
    CHECK(f.at(3, 2, 0) == 2.0);
    CHECK(f.at(2, 1, 0) == 2.0);
    CHECK(f.at(3, 3, 0) == 2.0);  // diagonal is one hop
    CHECK(f.at(0, 0, 0) == 4.0);

    CHECK(h_value(f, StateC::car(5.5, 4.1, 0)) == 0.0);
    CHECK(h_value(f, StateC::car(5.5, 4.1, 3.0)) == 0.0);  // heading ignored
    CHECK(h_value(f, StateC::car(-1.0, 4.1, 0)) == kInf);
}

TEST_CASE("blocked and unreachable cells are infinite") {
    GridMap m = parse_movingai_map(
        "type octile\nheight 3\nwidth 5\nmap\n"
        "..@..\n"
        "..@..\n"
        "..@..\n");
    DistanceField f = build_distance_field(m, {0.5, 0.5, 0});
    CHECK(f.at(2, 1, 0) == kInf);  // wall cell
    CHECK(f.at(4, 2, 0) == kInf);  // sealed right side
    CHECK(f.at(1, 2, 0) == 2.0);  // (0,0) -> (1,1) -> (1,2)
    CHECK(h_value(f, StateC::car(4.5, 1.5, 0)) == kInf);

    CHECK_THROWS_AS(build_distance_field(m, {2.5, 1.5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(build_distance_field(m, {-3.0, 0.5, 0}), std::invalid_argument);
}

TEST_CASE("volumetric fields are 26-connected") {
    GridMap m = parse_voxel_map("voxel 3 3 3 1\n" + std::string(
        "...\n...\n...\n"
        "...\n...\n...\n"
        "...\n...\n...\n"));
    DistanceField f = build_distance_field(m, {0.5, 0.5, 0.5});
    CHECK(f.at(0, 0, 0) == 0.0);
    CHECK(f.at(1, 1, 1) == 1.0);  // full-diagonal hop
    CHECK(f.at(2, 2, 2) == 2.0);
    CHECK(h_value(f, StateC::uav(1.5, 1.5, 1.5, 0, 1)) == 1.0);
}

TEST_CASE("hop values underestimate the octile oracle on random maps") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        GridMap m = random_map(rng, 30, 30, 0.3);
        // pick a free goal cell
        int gx = -1, gy = -1;
        for (int attempt = 0; attempt < 10000 && gx < 0; ++attempt) {
            int x = static_cast<int>(rng() % 30), y = static_cast<int>(rng() % 30);
            if (!m.at(x, y, 0)) {
                gx = x;
                gy = y;
            }
        }
        REQUIRE(gx >= 0);

        DistanceField f = build_distance_field(m, {gx + 0.5, gy + 0.5, 0});
        std::vector<double> exact = oracle::dijkstra_octile(m, gx, gy, 0);

        int checked = 0;
        for (int i = 0; i < 2000 && checked < 50; ++i) {
            int x = static_cast<int>(rng() % 30), y = static_cast<int>(rng() % 30);
            std::size_t idx = static_cast<std::size_t>(y) * 30 + x;
            if (m.at(x, y, 0) || exact[idx] == kInf) continue;
            ++checked;
            CHECK(f.at(x, y, 0) <= exact[idx] + 1e-12);
            CHECK(f.at(x, y, 0) < kInf);
        }
        CHECK(checked == 50);

        // reachability agreement: finite exactly where the oracle is
        for (int y = 0; y < 30; ++y)
            for (int x = 0; x < 30; ++x) {
                bool fin_f = f.at(x, y, 0) < kInf;
                bool fin_o = exact[static_cast<std::size_t>(y) * 30 + x] < kInf;
                CHECK(fin_f == fin_o);
            }
    }
}

TEST_CASE("field is consistent across adjacent free cells") {
    std::mt19937 rng(22);
    GridMap m = random_map(rng, 25, 25, 0.25);
    m.at(12, 12, 0) = 0;
    DistanceField f = build_distance_field(m, {12.5, 12.5, 0});
    for (int y = 0; y < 25; ++y)
        for (int x = 0; x < 25; ++x) {
            if (m.at(x, y, 0) || f.at(x, y, 0) == kInf) continue;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int nx = x + dx, ny = y + dy;
                    if ((dx == 0 && dy == 0) || !m.in_bounds(nx, ny, 0)) continue;
                    if (m.at(nx, ny, 0) || f.at(nx, ny, 0) == kInf) continue;
                    CHECK(std::fabs(f.at(x, y, 0) - f.at(nx, ny, 0)) <= m.cell_size + 1e-12);
                }
        }
}
