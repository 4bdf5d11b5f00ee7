#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sdd/overlap_table.hpp"
#include "sdd/subtree.hpp"

using namespace sdd;

namespace {

double max_component_error(const StateC& a, const StateC& b) {
    double e = std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
    e = std::max(e, std::fabs(a.z - b.z));
    e = std::max(e, ang_diff(a.theta, b.theta));
    return std::max(e, std::fabs(a.v - b.v));
}

// Depth-indexed enumeration straight from propagate, no shared machinery
// with build_subtree's canonical-transform path.
std::vector<std::vector<StateC>> enumerate_levels(const DynamicsModel& model, const StateC& s,
                                                  int H) {
    std::vector<std::vector<StateC>> levels;
    std::vector<StateC> cur{s};
    for (int d = 0; d < H; ++d) {
        std::vector<StateC> next;
        for (const StateC& q : cur)
            for (const ControlInput& u : model.control_set())
                next.push_back(model.propagate(q, u, model.primitive_duration()));
        levels.push_back(next);
        cur = std::move(next);
    }
    return levels;
}

double naive_overlap(const std::vector<std::vector<StateC>>& a,
                     const std::vector<std::vector<StateC>>& b, double r) {
    std::size_t total = 0, matched = 0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        total += a[d].size();
        for (const StateC& u : a[d]) {
            for (const StateC& u2 : b[d]) {
                if (position_distance(u, u2) < r) {
                    ++matched;
                    break;
                }
            }
        }
    }
    return static_cast<double>(matched) / static_cast<double>(total);
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

OverlapParams car_params(int H, double r, double R) {
    OverlapParams p;
    p.H = H;
    p.r = r;
    p.R = R;
    p.resolutions = default_resolutions(ModelKind::kCar3);
    return p;
}

}  // namespace

TEST_CASE("subtrees enumerate the full control tree") {
    DynamicsModel car = DynamicsModel::car3();
    StateC s = StateC::car(3, -1, 0.8);

    Subtree t1 = build_subtree(car, s, 1);
    REQUIRE(t1.levels.size() == 1);
    CHECK(t1.levels[0].size() == 5);
    CHECK(t1.total() == 5);

    std::uint64_t counter = 0;
    Subtree t2 = build_subtree(car, s, 2, &counter);
    REQUIRE(t2.levels.size() == 2);
    CHECK(t2.levels[0].size() == 5);
    CHECK(t2.levels[1].size() == 25);
    CHECK(t2.total() == 30);
    CHECK(counter == 6);  // the root plus its five children were expanded

    auto want = enumerate_levels(car, s, 2);
    for (std::size_t d = 0; d < 2; ++d) {
        REQUIRE(t2.levels[d].size() == want[d].size());
        for (std::size_t i = 0; i < want[d].size(); ++i)
            CHECK(max_component_error(t2.levels[d][i], want[d][i]) <= 1e-9);
    }

    DynamicsModel uav = DynamicsModel::uav5();
    Subtree tu = build_subtree(uav, StateC::uav(0, 0, 1, 0.3, 1.5), 2);
    CHECK(tu.levels[0].size() == 27);
    CHECK(tu.levels[1].size() == 729);
    auto wantu = enumerate_levels(uav, StateC::uav(0, 0, 1, 0.3, 1.5), 2);
    for (std::size_t i = 0; i < wantu[1].size(); ++i)
        CHECK(max_component_error(tu.levels[1][i], wantu[1][i]) <= 1e-9);
}

TEST_CASE("opposite headings mirror the level-1 offsets") {
    DynamicsModel car = DynamicsModel::car3();
    Subtree fwd = build_subtree(car, StateC::car(2, 2, 0), 1);
    Subtree rev = build_subtree(car, StateC::car(2, 2, kPi), 1);
    for (const StateC& u : fwd.levels[0]) {
        bool mirrored = false;
        for (const StateC& u2 : rev.levels[0]) {
            if (std::fabs((u.x - 2) + (u2.x - 2)) < 1e-9 &&
                std::fabs((u.y - 2) + (u2.y - 2)) < 1e-9)
                mirrored = true;
        }
        CHECK(mirrored);
    }
}

TEST_CASE("overlap ratio on hand-built trees") {
    auto tree = [](std::vector<StateC> l1, std::vector<StateC> l2) {
        Subtree t;
        t.root = StateC::car(0, 0, 0);
        t.levels = {std::move(l1), std::move(l2)};
        return t;
    };
    auto at = [](double x, double y) { return StateC::car(x, y, 0); };

    // 3-way branching, depth 2: 12 states, of which the first two at
    // depth 1 and five at depth 2 coincide with the other tree.
    Subtree a = tree({at(1, 0), at(2, 0), at(3, 0)},
                     {at(0, 1), at(1, 1), at(2, 1), at(3, 1), at(4, 1), at(50, 50), at(51, 50),
                      at(52, 50), at(53, 50)});
    Subtree b = tree({at(1, 0), at(2, 0), at(90, 90)},
                     {at(0, 1), at(1, 1), at(2, 1), at(3, 1), at(4, 1), at(70, 70), at(71, 70),
                      at(72, 70), at(73, 70)});
    OverlapParams p = car_params(2, 0.25, 10.0);
    CHECK(overlap_ratio(a, b, p) == 7.0 / 12.0);
    CHECK(overlap_ratio(b, a, p) == 7.0 / 12.0);

    // asymmetry: clustered states match one way only
    Subtree c = tree({at(0, 0), at(5, 0), at(10, 0)}, {});
    Subtree d = tree({at(0, 0), at(0.1, 0), at(-0.1, 0)}, {});
    c.levels.pop_back();
    d.levels.pop_back();
    CHECK(overlap_ratio(c, d, p) == doctest::Approx(1.0 / 3.0));
    CHECK(overlap_ratio(d, c, p) == doctest::Approx(1.0));

    // depth mismatch is a caller bug
    Subtree shallow = tree({at(0, 0)}, {});
    shallow.levels.pop_back();
    CHECK_THROWS_AS(overlap_ratio(a, shallow, p), std::invalid_argument);

    // the full-state switch brings heading into the match test
    Subtree h1 = tree({StateC::car(1, 0, 0)}, {});
    Subtree h2 = tree({StateC::car(1, 0, kPi)}, {});
    h1.levels.pop_back();
    h2.levels.pop_back();
    OverlapParams full = p;
    CHECK(overlap_ratio(h1, h2, p) == 1.0);
    full.full_state_overlap = true;
    CHECK(overlap_ratio(h1, h2, full) == 0.0);
}

TEST_CASE("subtree overlap matches the frozen examples") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(2, 0.25, 10.0);

    StateC s = StateC::car(4, 7, 1.0);
    CHECK(subtree_overlap(car, s, s, p) == 1.0);

    OverlapParams tiny = p;
    tiny.r = 1e-12;
    CHECK(subtree_overlap(car, s, StateC::car(4.3, 6.8, 1.7), tiny) == 0.0);

    std::uint64_t counter = 0;
    subtree_overlap(car, s, StateC::car(5, 7, 1.0), p, &counter);
    CHECK(counter == 12);  // six expansions per depth-2 tree, two trees
}

TEST_CASE("overlap agrees with the naive enumeration oracle") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(2, 0.3, 10.0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> off(-2, 2), ang(0, kTwoPi);
    for (int i = 0; i < 25; ++i) {
        StateC s = StateC::car(off(rng), off(rng), ang(rng));
        StateC s2 = StateC::car(off(rng), off(rng), ang(rng));
        double got = subtree_overlap(car, s, s2, p);
        double want = naive_overlap(enumerate_levels(car, s, 2), enumerate_levels(car, s2, 2),
                                    p.r);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("overlap never decreases as r grows") {
    DynamicsModel car = DynamicsModel::car3();
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> off(-1.5, 1.5), ang(0, kTwoPi);
    for (int i = 0; i < 20; ++i) {
        StateC s = StateC::car(off(rng), off(rng), ang(rng));
        StateC s2 = StateC::car(off(rng), off(rng), ang(rng));
        double prev = -1.0;
        for (double r : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
            OverlapParams p = car_params(2, r, 10.0);
            double eta = subtree_overlap(car, s, s2, p);
            CHECK(eta >= prev);
            prev = eta;
        }
    }
}

TEST_CASE("overlap is invariant under rigid transforms") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(2, 0.25, 10.0);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> off(-1.5, 1.5), shift(-40, 40), ang(0, kTwoPi);
    StateC s = StateC::car(0.4, -0.3, 1.9);
    StateC s2 = StateC::car(1.1, 0.8, 4.4);
    double base = subtree_overlap(car, s, s2, p);
    for (int i = 0; i < 500; ++i) {
        double tx = shift(rng), ty = shift(rng), phi = ang(rng);
        auto apply = [&](const StateC& q) {
            double c = std::cos(phi), sn = std::sin(phi);
            return StateC::car(c * q.x - sn * q.y + tx, sn * q.x + c * q.y + ty,
                               wrap_angle(q.theta + phi));
        };
        CHECK(subtree_overlap(car, apply(s), apply(s2), p) == base);
    }
}

TEST_CASE("precomputed car table matches online values") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(2, 0.25, 1.0);
    OverlapTable table = precompute_table(car, p, 1);

    // lattice-point count inside the ball: integer arithmetic, 0.25 grid
    int in_ball = 0;
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j)
            if (i * i + j * j <= 16) ++in_ball;
    CHECK(table.entry_count() == static_cast<std::uint64_t>(in_ball) * 16);

    StateC origin = StateC::car(0, 0, 0);
    CHECK(table.lookup(origin, origin) == 1.0);

    // snapped pairs agree with the online computation to float precision
    for (int i : {-3, -1, 0, 2}) {
        for (int k : {0, 3, 13}) {
            StateC s2 = StateC::car(i * 0.25, 0.5, k * (kPi / 8));
            double online = subtree_overlap(car, origin, s2, p);
            CHECK(table.lookup(origin, s2) ==
                  static_cast<double>(static_cast<float>(online)));
            CHECK(table.lookup(origin, s2) >= 0.0);
            CHECK(table.lookup(origin, s2) <= 1.0);
        }
    }

    // beyond one-primitive reach but inside R: strictly partial overlap
    OverlapParams far = car_params(1, 0.25, 3.0);
    OverlapTable table_far = precompute_table(car, far, 1);
    int count_far = 0;
    for (int i = -12; i <= 12; ++i)
        for (int j = -12; j <= 12; ++j)
            if (i * i + j * j <= 144) ++count_far;
    CHECK(table_far.entry_count() == static_cast<std::uint64_t>(count_far) * 16);

    StateC beyond = StateC::car(2.0, 0, 0);
    double eta = table_far.lookup(origin, beyond);
    CHECK(eta < 1.0);
    double naive = naive_overlap(enumerate_levels(car, origin, 1),
                                 enumerate_levels(car, beyond, 1), far.r);
    CHECK(eta == static_cast<double>(static_cast<float>(naive)));
}

TEST_CASE("out-of-ball queries fall back to the nearest stored key") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(1, 0.25, 1.0);
    OverlapTable table = precompute_table(car, p, 1);

    StateC origin = StateC::car(0, 0, 0);
    RelConfig rc = relative_config(origin, StateC::car(1.3, 0, 0));
    std::array<int, 6> boundary{};
    boundary[0] = 4;  // (1.0, 0), the nearest stored position with this heading
    CHECK(std::isnan(table.at_key(table.key_of(rc))));
    CHECK(table.lookup_rel(rc) == static_cast<double>(table.at_key(boundary)));
}

TEST_CASE("table files round-trip bit-exactly") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(2, 0.25, 1.0);
    OverlapTable table = precompute_table(car, p, 1);

    std::string p1 = temp_path("sovt_roundtrip_1.sovt");
    std::string p2 = temp_path("sovt_roundtrip_2.sovt");
    table.save(p1);
    OverlapTable loaded = OverlapTable::load(p1);
    loaded.save(p2);
    CHECK(file_bytes(p1) == file_bytes(p2));

    CHECK(loaded.entry_count() == table.entry_count());
    CHECK(loaded.kind() == table.kind());
    CHECK(loaded.params().H == p.H);
    CHECK(loaded.params().r == p.r);
    CHECK(loaded.params().R == p.R);
    CHECK(loaded.params().resolutions == p.resolutions);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> off(-1, 1), ang(0, kTwoPi);
    for (int i = 0; i < 200; ++i) {
        StateC s2 = StateC::car(off(rng), off(rng), ang(rng));
        CHECK(loaded.lookup(StateC::car(0, 0, 0), s2) ==
              table.lookup(StateC::car(0, 0, 0), s2));
    }
    std::remove(p1.c_str());
    std::remove(p2.c_str());

    CHECK_THROWS(OverlapTable::load(temp_path("missing_table.sovt")));
}

TEST_CASE("precompute is deterministic across thread counts") {
    DynamicsModel car = DynamicsModel::car3();
    OverlapParams p = car_params(1, 0.25, 1.0);
    std::string p1 = temp_path("sovt_threads_1.sovt");
    std::string p3 = temp_path("sovt_threads_3.sovt");
    precompute_table(car, p, 1).save(p1);
    precompute_table(car, p, 3).save(p3);
    CHECK(file_bytes(p1) == file_bytes(p3));
    std::remove(p1.c_str());
    std::remove(p3.c_str());
}

TEST_CASE("uav table keys carry both speeds") {
    DynamicsModel uav = DynamicsModel::uav5();
    OverlapParams p;
    p.H = 1;
    p.r = 0.25;
    p.R = 1.0;
    p.resolutions = {0.5, 0.5, 0.5, kPi / 4, 0.5, 0.5};
    OverlapTable table = precompute_table(uav, p, 0);

    int in_ball = 0;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
            for (int k = -2; k <= 2; ++k)
                if (i * i + j * j + k * k <= 4) ++in_ball;
    CHECK(table.entry_count() == static_cast<std::uint64_t>(in_ball) * 8 * 6 * 6);

    StateC hover = StateC::uav(0, 0, 0, 0, 1.0);
    CHECK(table.lookup(hover, hover) == 1.0);

    // same relative pose, different absolute speeds: different entries
    StateC fast = StateC::uav(0, 0, 0, 0, 3.0);
    StateC ahead_slow = StateC::uav(0.5, 0, 0, 0, 1.0);
    StateC ahead_fast = StateC::uav(0.5, 0, 0, 0, 3.0);
    double slow_eta = table.lookup(hover, ahead_slow);
    double cross_eta = table.lookup(fast, ahead_fast);
    CHECK(slow_eta >= 0.0);
    CHECK(cross_eta >= 0.0);
    double online_slow = subtree_overlap(uav, hover, ahead_slow, p);
    double online_cross = subtree_overlap(uav, fast, ahead_fast, p);
    CHECK(slow_eta == static_cast<double>(static_cast<float>(online_slow)));
    CHECK(cross_eta == static_cast<double>(static_cast<float>(online_cross)));
}
