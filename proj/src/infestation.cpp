#include "pestscout/infestation.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pestscout/rng.hpp"

namespace pestscout {

void SpreadParams::validate() const {
    if (initial_probability < 0 || initial_probability > 1) {
        throw std::invalid_argument("initial_probability must be in [0,1]");
    }
    if (severity < 0 || severity > 1) {
        throw std::invalid_argument("severity must be in [0,1]");
    }
}

void InfestationState::infest(int linear) {
    if (infested_[linear]) return;
    infested_[linear] = 1;
    ++infested_count_;
    ++cumulative_total_;
}

void InfestationState::destroy(int linear) {
    if (!infested_[linear]) {
        throw std::logic_error("destroy() on an uninfested plant: engine bug");
    }
    infested_[linear] = 0;
    --infested_count_;
    ++detected_total_;
}

void InfestationState::rebase() {
    cumulative_total_ = infested_count_;
    detected_total_ = 0;
    new_today_ = 0;
}

InfestationState seed_random(const FieldGrid& grid, const SpreadParams& params,
                             std::mt19937_64& rng) {
    params.validate();
    InfestationState state(grid.total_plants());
    const int rows = grid.num_planting_rows();
    const int slots = grid.plants_per_row();
    const int last_line = grid.num_plant_lines() - 1;
    for (int row = 0; row < rows; ++row) {
        for (int slot = 0; slot < slots; ++slot) {
            if (!chance(rng, params.initial_probability)) continue;
            if (row == 0) {
                state.infest(grid.to_linear({0, slot}));
            } else if (row == rows - 1) {
                state.infest(grid.to_linear({last_line, slot}));
            } else {
                // Interior planting rows carry plants on both sides; a hit
                // infests the facing pair.
                state.infest(grid.to_linear({2 * row - 1, slot}));
                state.infest(grid.to_linear({2 * row, slot}));
            }
        }
    }
    return state;
}

InfestationState seed_from_mask(const FieldGrid& grid, const std::vector<std::uint8_t>& mask) {
    if (static_cast<int>(mask.size()) != grid.total_plants()) {
        throw std::invalid_argument("mask size does not match grid");
    }
    InfestationState state(grid.total_plants());
    for (int i = 0; i < grid.total_plants(); ++i) {
        if (mask[i] == 1) {
            state.infest(i);
        } else if (mask[i] != 0) {
            throw std::invalid_argument("mask cells must be 0 or 1");
        }
    }
    return state;
}

InfestationState seed_from_map(const FieldGrid& grid, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path.string());
    std::vector<std::uint8_t> mask;
    mask.reserve(grid.total_plants());
    std::string line;
    int line_count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++line_count;
        std::stringstream ss(line);
        std::string cell;
        int cells = 0;
        while (std::getline(ss, cell, ',')) {
            if (cell == "0") mask.push_back(0);
            else if (cell == "1") mask.push_back(1);
            else throw std::invalid_argument("map cell must be 0 or 1, got '" + cell + "'");
            ++cells;
        }
        if (cells != grid.plants_per_row()) {
            throw std::invalid_argument("map row " + std::to_string(line_count) + " has " +
                                        std::to_string(cells) + " cells, expected " +
                                        std::to_string(grid.plants_per_row()));
        }
    }
    if (line_count != grid.num_plant_lines()) {
        throw std::invalid_argument("map has " + std::to_string(line_count) +
                                    " lines, expected " + std::to_string(grid.num_plant_lines()));
    }
    return seed_from_mask(grid, mask);
}

std::string map_text(const InfestationState& state, const FieldGrid& grid) {
    std::string out;
    out.reserve(grid.total_plants() * 2 + grid.num_plant_lines());
    for (int line = 0; line < grid.num_plant_lines(); ++line) {
        for (int slot = 0; slot < grid.plants_per_row(); ++slot) {
            if (slot) out += ',';
            out += state.infested(grid.to_linear({line, slot})) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

void save_map(const InfestationState& state, const FieldGrid& grid,
              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write map file: " + path.string());
    out << map_text(state, grid);
}

InfestationState seed_clustered(const FieldGrid& grid, int clusters, int growth_steps,
                                double growth_severity, std::mt19937_64& rng) {
    if (clusters < 1) throw std::invalid_argument("clusters must be >= 1");
    std::vector<int> boundary;
    const auto mask = boundary_mask(grid);
    for (int i = 0; i < grid.total_plants(); ++i) {
        if (mask[i]) boundary.push_back(i);
    }
    InfestationState state(grid.total_plants());
    // Sample distinct centers from the boundary.
    const int want = std::min<int>(clusters, static_cast<int>(boundary.size()));
    for (int i = 0; i < want; ++i) {
        int j = uniform_int(rng, i, static_cast<int>(boundary.size()) - 1);
        std::swap(boundary[i], boundary[j]);
        state.infest(boundary[i]);
    }
    for (int step = 0; step < growth_steps; ++step) {
        spread_end_of_day(state, grid, growth_severity, false, rng);
    }
    state.rebase();
    return state;
}

int spread_end_of_day(InfestationState& state, const FieldGrid& grid, double severity,
                      bool per_edge, std::mt19937_64& rng) {
    if (severity < 0 || severity > 1) throw std::invalid_argument("severity must be in [0,1]");
    const std::vector<std::uint8_t> snapshot = state.infested_;
    int new_today = 0;
    for (int i = 0; i < grid.total_plants(); ++i) {
        if (!snapshot[i]) continue;
        const auto neighbors = grid.adjacency(grid.from_linear(i));
        if (per_edge) {
            for (const auto& nb : neighbors) {
                int id = grid.to_linear(nb);
                if (!state.infested_[id] && chance(rng, severity)) {
                    state.infest(id);
                    ++new_today;
                }
            }
        } else {
            if (!chance(rng, severity)) continue;
            for (const auto& nb : neighbors) {
                int id = grid.to_linear(nb);
                if (!state.infested_[id]) {
                    state.infest(id);
                    ++new_today;
                }
            }
        }
    }
    state.new_today_ = new_today;
    return new_today;
}

}  // namespace pestscout
