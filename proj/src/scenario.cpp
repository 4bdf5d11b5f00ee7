#include "sdd/scenario.hpp"

#include <random>

#include "sdd/distance_field.hpp"

namespace sdd {

std::vector<Scenario> generate_scenarios(const GridMap& map, const DynamicsModel& model,
                                         const std::string& map_name, int count,
                                         std::uint64_t seed, double min_separation,
                                         double goal_radius) {
    if (count < 0) throw std::invalid_argument("scenario count must be nonnegative");
    std::vector<Scenario> out;
    if (count == 0) return out;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_x(0, map.width - 1);
    std::uniform_int_distribution<int> pick_y(0, map.height - 1);
    std::uniform_int_distribution<int> pick_z(0, map.depth - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool uav = model.kind() == ModelKind::kUav5;
    const Uav5Params& up = model.uav_params();

    auto free_cell_center = [&](std::array<double, 3>& pos, int rejections_left) -> int {
        while (rejections_left > 0) {
            const int ix = pick_x(rng);
            const int iy = pick_y(rng);
            const int iz = map.depth == 1 ? 0 : pick_z(rng);
            if (!map.at(ix, iy, iz)) {
                pos = {(ix + 0.5) * map.cell_size, (iy + 0.5) * map.cell_size,
                       map.depth == 1 ? 0.0 : (iz + 0.5) * map.cell_size};
                return rejections_left;
            }
            --rejections_left;
        }
        throw std::runtime_error("scenario sampling exhausted: no free cell found");
    };

    constexpr int kMaxRejections = 10'000;
    for (int k = 0; k < count; ++k) {
        int budget = kMaxRejections;
        while (true) {
            if (budget <= 0)
                throw std::runtime_error(
                    "scenario sampling exhausted: separation or reachability unsatisfiable");
            std::array<double, 3> s_pos{}, g_pos{};
            budget = free_cell_center(s_pos, budget);
            budget = free_cell_center(g_pos, budget);
            const double theta = unit(rng) * kTwoPi;
            const double speed = uav ? up.v_min + unit(rng) * (up.v_max - up.v_min) : 0.0;
            --budget;

            const double dx = s_pos[0] - g_pos[0];
            const double dy = s_pos[1] - g_pos[1];
            const double dz = s_pos[2] - g_pos[2];
            if (dx * dx + dy * dy + dz * dz < min_separation * min_separation) continue;

            const DistanceField field = build_distance_field(map, g_pos);
            StateC start = uav ? StateC::uav(s_pos[0], s_pos[1], s_pos[2], theta, speed)
                               : StateC::car(s_pos[0], s_pos[1], theta);
            if (h_value(field, start) == kInf) continue;

            Scenario sc;
            sc.id = map_name + ":" + std::to_string(k);
            sc.map_name = map_name;
            sc.start = start;
            sc.goal.center = g_pos;
            sc.goal.radius = goal_radius;
            out.push_back(sc);
            break;
        }
    }
    return out;
}

}  // namespace sdd
