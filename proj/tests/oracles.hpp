#pragma once

// Independent reference implementations the unit suites check the
// library against. Deliberately brute force: fixed-step RK4 instead of
// closed forms, Dijkstra instead of BFS orderings, exhaustive
// enumeration instead of lattices.

#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

#include "sdd/dynamics.hpp"
#include "sdd/grid_map.hpp"
#include "sdd/state.hpp"

namespace oracle {

// One RK4 step of y' = f(t, y) for a fixed-size state vector.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(const std::array<double, N>& y, double t, double h, F&& f) {
    auto add = [](std::array<double, N> a, const std::array<double, N>& b, double s) {
        for (std::size_t i = 0; i < N; ++i) a[i] += s * b[i];
        return a;
    };
    std::array<double, N> k1 = f(t, y);
    std::array<double, N> k2 = f(t + h / 2, add(y, k1, h / 2));
    std::array<double, N> k3 = f(t + h / 2, add(y, k2, h / 2));
    std::array<double, N> k4 = f(t + h, add(y, k3, h));
    std::array<double, N> out = y;
    for (std::size_t i = 0; i < N; ++i)
        out[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
}

template <std::size_t N, typename F>
std::array<double, N> rk4_integrate(std::array<double, N> y, double T, double h, F&& f) {
    int steps = static_cast<int>(std::ceil(T / h - 1e-12));
    for (int i = 0; i < steps; ++i) {
        double t0 = T * i / steps;
        double t1 = T * (i + 1) / steps;
        y = rk4_step(y, t0, t1 - t0, f);
    }
    return y;
}

inline sdd::StateC rk4_car(const sdd::Car3Params& p, const sdd::StateC& s, double omega,
                           double T, double h = 1e-4) {
    auto f = [&](double, const std::array<double, 3>& y) {
        return std::array<double, 3>{p.speed * std::cos(y[2]), p.speed * std::sin(y[2]), omega};
    };
    auto y = rk4_integrate(std::array<double, 3>{s.x, s.y, s.theta}, T, h, f);
    sdd::StateC out = s;
    out.x = y[0];
    out.y = y[1];
    out.theta = sdd::wrap_angle(y[2]);
    return out;
}

// Uav dynamics are smooth except where the speed clamp engages; the
// engage time is plain algebra on v(t) = v0 + a t, so integrate the two
// smooth pieces separately.
inline sdd::StateC rk4_uav(const sdd::Uav5Params& p, const sdd::StateC& s,
                           const sdd::ControlInput& u, double T, double h = 1e-4) {
    double v0 = std::min(std::max(s.v, p.v_min), p.v_max);
    double t_hit = T;  // when the clamp engages and acceleration dies
    if (u.a_xy > 0) t_hit = std::min(T, (p.v_max - v0) / u.a_xy);
    if (u.a_xy < 0) t_hit = std::min(T, (p.v_min - v0) / u.a_xy);

    auto smooth = [&](double a) {
        return [&, a](double, const std::array<double, 5>& y) {
            return std::array<double, 5>{y[4] * std::cos(y[3]), y[4] * std::sin(y[3]), u.v_z,
                                         u.omega, a};
        };
    };
    std::array<double, 5> y{s.x, s.y, s.z, s.theta, v0};
    if (t_hit > 0) y = rk4_integrate(y, t_hit, h, smooth(u.a_xy));
    y[4] = std::min(std::max(y[4], p.v_min), p.v_max);
    if (T - t_hit > 0) y = rk4_integrate(y, T - t_hit, h, smooth(0.0));

    sdd::StateC out = s;
    out.x = y[0];
    out.y = y[1];
    out.z = y[2];
    out.theta = sdd::wrap_angle(y[3]);
    out.v = y[4];
    return out;
}

// Dijkstra over grid cells with octile / 26-neighbor moves of their true
// euclidean lengths. Lower-bounds any collision-free path between cell
// centers, and every hop costs at least cell_size, so it also upper
// bounds how optimistic the hop-count heuristic may be.
inline std::vector<double> dijkstra_octile(const sdd::GridMap& map, int gx, int gy, int gz) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(map.cell_count(), inf);
    auto idx = [&](int x, int y, int z) {
        return (static_cast<std::size_t>(z) * map.height + y) * map.width + x;
    };
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[idx(gx, gy, gz)] = 0.0;
    open.push({0.0, idx(gx, gy, gz)});
    while (!open.empty()) {
        auto [d, i] = open.top();
        open.pop();
        if (d > dist[i]) continue;
        int z = static_cast<int>(i / (static_cast<std::size_t>(map.width) * map.height));
        int rem = static_cast<int>(i % (static_cast<std::size_t>(map.width) * map.height));
        int y = rem / map.width;
        int x = rem % map.width;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    if (map.depth == 1 && dz != 0) continue;
                    int nx = x + dx, ny = y + dy, nz = z + dz;
                    if (!map.in_bounds(nx, ny, nz) || map.at(nx, ny, nz)) continue;
                    double step = map.cell_size * std::sqrt(double(dx * dx + dy * dy + dz * dz));
                    if (dist[i] + step < dist[idx(nx, ny, nz)]) {
                        dist[idx(nx, ny, nz)] = dist[i] + step;
                        open.push({dist[idx(nx, ny, nz)], idx(nx, ny, nz)});
                    }
                }
    }
    return dist;
}

}  // namespace oracle
