#include "pestscout/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pestscout {

namespace {

// Squarest lines x slots layout with an even number of lines holding at
// least `count` plants. Scenario definitions fix plant counts; geometry is
// synthesized around them.
std::pair<int, int> layout_for_count(int count) {
    if (count < 2) throw std::invalid_argument("plant_count must be at least 2");
    for (int total = count;; ++total) {
        int best_lines = 0;
        int best_gap = std::numeric_limits<int>::max();
        for (int lines = 2; lines <= total; lines += 2) {
            if (total % lines != 0) continue;
            int slots = total / lines;
            int gap = std::abs(lines - slots);
            if (gap < best_gap) {
                best_gap = gap;
                best_lines = lines;
            }
        }
        if (best_lines != 0) return {best_lines, total / best_lines};
    }
}

}  // namespace

FieldGrid FieldGrid::build(const FieldSpec& spec) {
    if (spec.row_length_m <= 0 || spec.row_width_m <= 0 || spec.plant_spacing_m <= 0 ||
        spec.area_dunam <= 0) {
        throw std::invalid_argument("field dimensions must be positive");
    }
    FieldGrid grid;
    grid.spec_ = spec;
    if (spec.plant_count) {
        auto [lines, slots] = layout_for_count(*spec.plant_count);
        grid.num_plant_lines_ = lines;
        grid.plants_per_row_ = slots;
        grid.num_planting_rows_ = lines / 2 + 1;
        // Keep the physical spacing; row length follows from the slot count.
        grid.spec_.row_length_m = slots * spec.plant_spacing_m;
        return grid;
    }
    grid.plants_per_row_ = static_cast<int>(std::floor(spec.row_length_m / spec.plant_spacing_m));
    if (grid.plants_per_row_ < 1) {
        throw std::invalid_argument("row too short for a single plant");
    }
    double area_m2 = spec.area_dunam * 1000.0;
    grid.num_planting_rows_ =
        static_cast<int>(std::llround(area_m2 / (spec.row_length_m * spec.row_width_m)));
    if (grid.num_planting_rows_ < 2) {
        throw std::invalid_argument("field area yields fewer than 2 planting rows");
    }
    grid.num_plant_lines_ = 2 * grid.num_planting_rows_ - 2;
    return grid;
}

std::optional<int> FieldGrid::facing_line(int line) const {
    if (line <= 0 || line >= num_plant_lines_ - 1) return std::nullopt;
    return (line % 2 == 1) ? line + 1 : line - 1;
}

std::vector<PlantIndex> FieldGrid::adjacency(PlantIndex p) const {
    std::vector<PlantIndex> out;
    out.reserve(3);
    if (p.slot > 0) out.push_back({p.line, p.slot - 1});
    if (p.slot + 1 < plants_per_row_) out.push_back({p.line, p.slot + 1});
    if (auto facing = facing_line(p.line)) out.push_back({*facing, p.slot});
    return out;
}

double FieldGrid::travel_distance_m(PlantIndex a, PlantIndex b) const {
    const double sp = spec_.plant_spacing_m;
    const double w = spec_.charge_crossing ? spec_.row_width_m : 0.0;
    if (a == b) return 0.0;
    if (a.line == b.line) return std::abs(a.slot - b.slot) * sp;
    if (corridor_of(a.line) == corridor_of(b.line)) {
        return std::abs(a.slot - b.slot) * sp + w;
    }
    // Exit via either row end, move across at the headland, re-enter.
    const int last = plants_per_row_ - 1;
    double lateral = std::abs(a.line - b.line) * w;
    double via_low = (a.slot + b.slot) * sp;
    double via_high = ((last - a.slot) + (last - b.slot)) * sp;
    return std::min(via_low, via_high) + lateral;
}

double travel_time_s(const FieldGrid& grid, double speed_m_per_s, PlantIndex a, PlantIndex b) {
    if (speed_m_per_s <= 0) throw std::invalid_argument("speed must be positive");
    return grid.travel_distance_m(a, b) / speed_m_per_s;
}

std::vector<std::uint8_t> boundary_mask(const FieldGrid& grid) {
    std::vector<std::uint8_t> mask(grid.total_plants(), 0);
    const int L = grid.num_plant_lines();
    const int N = grid.plants_per_row();
    for (int slot = 0; slot < N; ++slot) {
        mask[grid.to_linear({0, slot})] = 1;
        mask[grid.to_linear({L - 1, slot})] = 1;
    }
    for (int line = 0; line < L; ++line) {
        mask[grid.to_linear({line, 0})] = 1;
        mask[grid.to_linear({line, N - 1})] = 1;
    }
    return mask;
}

}  // namespace pestscout
