#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "pestscout/field.hpp"

namespace pestscout {

struct SpreadParams {
    double initial_probability = 0.3;
    double severity = 0.3;  // per-day spread chance
    // One random draw gates an infested plant's whole neighbor set (the
    // reference behavior). The per-edge variant draws once per neighbor.
    bool per_edge = false;

    void validate() const;
};

// Per-plant insect presence plus whole-run accounting. One state belongs to
// one simulation run.
class InfestationState {
  public:
    InfestationState() = default;
    explicit InfestationState(int plant_count) : infested_(plant_count, 0) {}

    bool infested(int linear) const { return infested_[linear] != 0; }
    int plant_count() const { return static_cast<int>(infested_.size()); }
    int infested_count() const { return infested_count_; }
    long long cumulative_total() const { return cumulative_total_; }
    long long detected_total() const { return detected_total_; }
    int new_today() const { return new_today_; }
    const std::vector<std::uint8_t>& mask() const { return infested_; }

    void infest(int linear);   // 0 -> 1 transition; counts a new insect
    void destroy(int linear);  // detected insect is removed; must be infested

    // Re-baseline after artificial warm-up growth: the current population
    // becomes the initial one.
    void rebase();

    friend int spread_end_of_day(InfestationState&, const FieldGrid&, double, bool,
                                 std::mt19937_64&);

  private:
    std::vector<std::uint8_t> infested_;
    int infested_count_ = 0;
    long long cumulative_total_ = 0;
    long long detected_total_ = 0;
    int new_today_ = 0;
};

// Reference seeding: one draw per (planting row, slot); a hit on an interior
// planting row infests both of its facing plants, edge rows their single
// line.
InfestationState seed_random(const FieldGrid& grid, const SpreadParams& params,
                             std::mt19937_64& rng);

InfestationState seed_from_mask(const FieldGrid& grid, const std::vector<std::uint8_t>& mask);

// Map file: one text line per plant line, comma-separated 0/1 cells.
InfestationState seed_from_map(const FieldGrid& grid, const std::filesystem::path& path);
std::string map_text(const InfestationState& state, const FieldGrid& grid);
void save_map(const InfestationState& state, const FieldGrid& grid,
              const std::filesystem::path& path);

// End-of-day spread from a snapshot of the currently infested plants; plants
// infested during the step do not propagate until the next day. Returns the
// number of new insects.
int spread_end_of_day(InfestationState& state, const FieldGrid& grid, double severity,
                      bool per_edge, std::mt19937_64& rng);

// Hot-spot style initial population: cluster centers drawn from the field
// boundary (pests enter from the edges and paths), grown locally for a few
// spread steps. The grown population is re-baselined as the initial one.
InfestationState seed_clustered(const FieldGrid& grid, int clusters, int growth_steps,
                                double growth_severity, std::mt19937_64& rng);

}  // namespace pestscout
