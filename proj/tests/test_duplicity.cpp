#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "sdd/duplicity.hpp"
#include "sdd/kd_tree.hpp"
#include "sdd/seen_set.hpp"

using namespace sdd;

namespace {

DuplicityParams euclid_params(double R = 10.0) {
    DuplicityParams p;
    p.mode = DuplicityMode::kEuclidean;
    p.R = R;
    return p;
}

DuplicityParams subtree_params(DuplicityMode mode, double R = 10.0, double c = 0.25) {
    DuplicityParams p;
    p.mode = mode;
    p.R = R;
    p.c = c;
    p.overlap.H = 2;
    p.overlap.r = 0.25;
    p.overlap.R = R;
    p.overlap.resolutions = default_resolutions(ModelKind::kCar3);
    return p;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

TEST_CASE("kd-tree queries match brute force") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coord(-50, 50);
    for (int dims : {2, 3}) {
        PointKdTree tree(dims);
        std::vector<std::array<double, 3>> pts;
        for (int i = 0; i < 800; ++i) {
            std::array<double, 3> p{coord(rng), coord(rng),
                                    dims == 3 ? coord(rng) : 0.0};
            pts.push_back(p);
            tree.insert(p);

            if (i % 97 != 0) continue;
            std::array<double, 3> q{coord(rng), coord(rng), dims == 3 ? coord(rng) : 0.0};
            auto d2 = [&](const std::array<double, 3>& a) {
                double s = 0;
                for (int k = 0; k < dims; ++k) s += (a[k] - q[k]) * (a[k] - q[k]);
                return s;
            };

            std::vector<std::uint32_t> got;
            tree.radius_query(q, 20.0, got);
            std::sort(got.begin(), got.end());
            std::vector<std::uint32_t> want;
            for (std::uint32_t id = 0; id < pts.size(); ++id)
                if (d2(pts[id]) <= 400.0) want.push_back(id);
            CHECK(got == want);

            double best = -1;
            std::uint32_t got_nn = tree.nearest(q, &best);
            std::uint32_t want_nn = 0;
            for (std::uint32_t id = 1; id < pts.size(); ++id)
                if (d2(pts[id]) < d2(pts[want_nn])) want_nn = id;
            CHECK(got_nn == want_nn);
            CHECK(best == doctest::Approx(std::sqrt(d2(pts[want_nn]))));
        }
    }

    PointKdTree empty(2);
    CHECK(empty.nearest({0, 0, 0}) == UINT32_MAX);
    std::vector<std::uint32_t> out;
    empty.radius_query({0, 0, 0}, 5, out);
    CHECK(out.empty());
}

TEST_CASE("kd-tree nearest ties resolve to the lowest id") {
    PointKdTree tree(2);
    tree.insert({1, 0, 0});
    tree.insert({-1, 0, 0});
    tree.insert({1, 0, 0});
    CHECK(tree.nearest({0.9, 0, 0}) == 0);
    CHECK(tree.nearest({0, 0, 0}) == 0);  // both at distance 1; id 0 wins
}

TEST_CASE("seen set stores states with their parent gamma") {
    SeenSet seen(2);
    seen.insert(StateC::car(1, 1, 0), 0.8);
    seen.insert(StateC::car(4, 1, 2.0), 1.0);
    CHECK(seen.size() == 2);
    CHECK(seen.state(1).theta == 2.0);
    CHECK(seen.parent_gamma(0) == 0.8);

    std::vector<std::uint32_t> ids;
    seen.radius_query(StateC::car(0, 1, 0), 1.5, ids);
    REQUIRE(ids.size() == 1);
    CHECK(ids[0] == 0);
}

TEST_CASE("euclidean duplicity matches the frozen examples") {
    DuplicityParams p = euclid_params(10.0);
    SeenSet seen(2);
    StateC s = StateC::car(0, 0, 0);

    CHECK(dup_euclid(s, seen, 1.0, p) == 0.0);  // nothing seen yet

    seen.insert(StateC::car(0, 0, 0), 1.0);
    CHECK(dup_euclid(s, seen, 1.0, p) == 1.0);  // exact duplicate

    SeenSet half(2);
    half.insert(StateC::car(5, 0, 0), 1.0);  // d_NN = R/2
    CHECK(dup_euclid(s, half, 1.0, p) == doctest::Approx(0.5));

    SeenSet edge(2);
    edge.insert(StateC::car(0, 8, 0), 1.0);  // d_NN = R * gamma
    CHECK(dup_euclid(s, edge, 0.8, p) == doctest::Approx(0.0));

    // gamma shrinks the normalization: same neighbor looks less novel
    CHECK(dup_euclid(s, half, 0.75, p) == doctest::Approx(1.0 - 5.0 / 7.5));

    CHECK(dup_euclid(s, half, 0.0, p) == 0.0);  // blocked-in parent
}

TEST_CASE("pairwise subtree duplicity matches the frozen examples") {
    DuplicityParams p = subtree_params(DuplicityMode::kSubtreeOnline, 10.0, 0.5);

    StateC s = StateC::car(0, 0, 0);
    StateC at_d = StateC::car(10.0, 0, 0);  // d == R, gamma 1

    // eta == c reduces to the euclidean form
    double d = distance(s, at_d, p.weights);
    CHECK(dup_subtree_pair(s, at_d, 0.5, 1.0, p) ==
          doctest::Approx(clamp01(1.0 - d / (p.R * 1.0))));

    CHECK(dup_subtree_pair(s, at_d, 1.0, 1.0, p) == doctest::Approx(0.5));
    CHECK(dup_subtree_pair(s, s, 0.0, 1.0, p) == 1.0);   // d = 0
    CHECK(dup_subtree_pair(s, at_d, 0.7, 0.0, p) == 0.0);  // gamma 0
}

TEST_CASE("pairwise duplicity equals its derived-metric form") {
    DuplicityParams p = subtree_params(DuplicityMode::kSubtreeOnline, 7.0, 0.3);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> off(-8, 8), ang(0, kTwoPi), unit(0, 1);
    for (int i = 0; i < 500; ++i) {
        StateC s = StateC::car(off(rng), off(rng), ang(rng));
        StateC s2 = StateC::car(off(rng), off(rng), ang(rng));
        double eta = unit(rng), gamma = unit(rng);
        double got = dup_subtree_pair(s, s2, eta, gamma, p);
        double d_s = distance(s, s2, p.weights) * (1.0 + p.c - eta);
        double want = gamma == 0.0 ? 0.0 : clamp01(1.0 - d_s / (p.R * gamma));
        CHECK(got == want);
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("pairwise duplicity is nondecreasing in eta") {
    DuplicityParams p = subtree_params(DuplicityMode::kSubtreeOnline, 10.0, 0.4);
    StateC s = StateC::car(0, 0, 0);
    StateC s2 = StateC::car(3, 2, 1);
    double prev = -1;
    for (double eta = 0.0; eta <= 1.0; eta += 0.125) {
        double v = dup_subtree_pair(s, s2, eta, 0.9, p);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("set duplicity is the max over neighbors") {
    DynamicsModel car = DynamicsModel::car3();
    DuplicityParams p = subtree_params(DuplicityMode::kSubtreeOnline, 10.0, 0.25);

    SeenSet seen(2);
    StateC s = StateC::car(0, 0, 0.4);
    CHECK(dup_subtree_set(car, s, seen, 1.0, p) == 0.0);  // empty set

    seen.insert(StateC::car(1.5, 0.5, 0.2), 1.0);
    double single = dup_subtree_set(car, s, seen, 0.9, p);
    double eta0 = subtree_overlap(car, s, seen.state(0), p.overlap);
    CHECK(single == dup_subtree_pair(s, seen.state(0), eta0, 0.9, p));

    seen.insert(StateC::car(-0.5, 1.0, 5.1), 1.0);
    seen.insert(StateC::car(20, 20, 0), 1.0);  // outside R, must be ignored
    double got = dup_subtree_set(car, s, seen, 0.9, p);
    double want = 0.0;
    for (std::uint32_t id = 0; id < 2; ++id) {
        double eta = subtree_overlap(car, s, seen.state(id), p.overlap);
        want = std::max(want, dup_subtree_pair(s, seen.state(id), eta, 0.9, p));
    }
    CHECK(got == want);

    std::uint64_t expansions = 0;
    dup_subtree_set(car, s, seen, 0.9, p, &expansions);
    CHECK(expansions == 18);  // one owned tree + two neighbor trees, six each
}

TEST_CASE("table mode reproduces online duplicity on snapped states") {
    DynamicsModel car = DynamicsModel::car3();
    DuplicityParams online = subtree_params(DuplicityMode::kSubtreeOnline, 2.0, 0.25);
    online.overlap.R = 2.0;
    OverlapTable table = precompute_table(car, online.overlap, 1);

    DuplicityParams tab = online;
    tab.mode = DuplicityMode::kSubtreeTable;
    tab.table = &table;

    StateC s = StateC::car(0, 0, 0);
    SeenSet seen(2);
    seen.insert(StateC::car(0.5, -0.25, kPi / 4), 1.0);
    seen.insert(StateC::car(-1.0, 0.75, 3 * kPi / 2), 0.7);

    double v_table = duplicity(car, s, seen, 0.9, tab);
    double v_online = duplicity(car, s, seen, 0.9, online);
    CHECK(v_table == doctest::Approx(v_online).epsilon(1e-6));
}

TEST_CASE("inflation follows max(eps_max * dup, eps0)") {
    DuplicityParams p;
    p.eps0 = 1.0;
    p.eps_max = 2.0;
    CHECK(inflation(0.0, p) == 1.0);
    CHECK(inflation(1.0, p) == 2.0);
    CHECK(inflation(0.4, p) == 1.0);  // max(0.8, 1)
    CHECK(inflation(0.75, p) == 1.5);

    std::mt19937 rng(29);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int i = 0; i < 200; ++i) {
        double e = inflation(unit(rng), p);
        CHECK(e >= p.eps0);
        CHECK(e <= p.eps_max);
    }
}

TEST_CASE("mode dispatch and parameter validation") {
    DynamicsModel car = DynamicsModel::car3();
    SeenSet seen(2);
    seen.insert(StateC::car(0, 0, 0), 1.0);

    DuplicityParams none;
    none.mode = DuplicityMode::kNone;
    CHECK(duplicity(car, StateC::car(0, 0, 0), seen, 1.0, none) == 0.0);

    DuplicityParams p = subtree_params(DuplicityMode::kSubtreeTable);
    CHECK_THROWS_AS(p.validate(ModelKind::kCar3), std::invalid_argument);  // no table

    DuplicityParams bad_eps = euclid_params();
    bad_eps.eps_max = 0.5;
    CHECK_THROWS_AS(bad_eps.validate(ModelKind::kCar3), std::invalid_argument);

    DuplicityParams bad_c = euclid_params();
    bad_c.c = 1.5;
    CHECK_THROWS_AS(bad_c.validate(ModelKind::kCar3), std::invalid_argument);

    DuplicityParams bad_R = euclid_params();
    bad_R.R = 0.0;
    CHECK_THROWS_AS(bad_R.validate(ModelKind::kCar3), std::invalid_argument);

    DuplicityParams ok = euclid_params();
    ok.eps0 = 1.0;
    ok.eps_max = 1.0;  // the plain-A* configuration stays legal
    ok.validate(ModelKind::kCar3);
}

TEST_CASE("duplicity stays in range over random seen sets") {
    DynamicsModel car = DynamicsModel::car3();
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> off(-12, 12), ang(0, kTwoPi), unit(0, 1);

    for (DuplicityMode mode : {DuplicityMode::kEuclidean, DuplicityMode::kSubtreeOnline}) {
        DuplicityParams p = subtree_params(mode, 6.0, 0.25);
        SeenSet seen(2);
        for (int i = 0; i < 60; ++i)
            seen.insert(StateC::car(off(rng), off(rng), ang(rng)), unit(rng));
        for (int i = 0; i < 60; ++i) {
            StateC s = StateC::car(off(rng), off(rng), ang(rng));
            double dup = duplicity(car, s, seen, unit(rng), p);
            CHECK(dup >= 0.0);
            CHECK(dup <= 1.0);
            double eps = inflation(dup, p);
            CHECK(eps >= p.eps0);
            CHECK(eps <= p.eps_max);
        }
    }
}
