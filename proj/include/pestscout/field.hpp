#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pestscout {

// Geometry of a rectangular row-crop field. A field of R planting rows has
// L = 2R - 2 inspectable plant lines: the interior rows contribute a line on
// each side, the two edge rows only one. Lines are numbered across the field;
// lines (1,2), (3,4), ... are the two sides of the same planting row and face
// each other, lines 0 and L-1 face nothing. The drivable corridors lie
// between consecutive planting rows: corridor c is flanked by lines 2c and
// 2c+1.
struct FieldSpec {
    double row_length_m = 100.0;
    double row_width_m = 3.5;  // corridor width between planting rows
    double plant_spacing_m = 2.0;
    double area_dunam = 2.0;  // 1 dunam = 1000 m^2
    // When set, the layout is chosen to hold at least this many plants
    // (scenario definitions fix plant counts, not geometry).
    std::optional<int> plant_count;
    // Whether changing plant line charges row_width_m per line crossed in the
    // travel metric. Configurable; on by default.
    bool charge_crossing = true;
};

struct PlantIndex {
    int line = 0;
    int slot = 0;
    friend bool operator==(const PlantIndex&, const PlantIndex&) = default;
};

class FieldGrid {
  public:
    static FieldGrid build(const FieldSpec& spec);

    const FieldSpec& spec() const { return spec_; }
    int plants_per_row() const { return plants_per_row_; }
    int num_planting_rows() const { return num_planting_rows_; }
    int num_plant_lines() const { return num_plant_lines_; }
    int total_plants() const { return num_plant_lines_ * plants_per_row_; }

    bool contains(PlantIndex p) const {
        return p.line >= 0 && p.line < num_plant_lines_ && p.slot >= 0 && p.slot < plants_per_row_;
    }
    int to_linear(PlantIndex p) const { return p.line * plants_per_row_ + p.slot; }
    PlantIndex from_linear(int id) const {
        return {id / plants_per_row_, id % plants_per_row_};
    }

    // The line on the opposite side of the same planting row, if any.
    // Pairs (1,2), (3,4), ...; lines 0 and L-1 are unpaired.
    std::optional<int> facing_line(int line) const;

    // Corridor the robot drives to reach this line. Lines 2c and 2c+1 share
    // corridor c.
    int corridor_of(int line) const { return line / 2; }

    // Within-line slot neighbors plus the facing line's same-slot plant.
    // This is the spread topology of the reference model.
    std::vector<PlantIndex> adjacency(PlantIndex p) const;

    // Driving distance between two plant stops. Within a corridor the robot
    // moves along it; changing corridors requires exiting via a row end.
    // Crossing to a different line costs row_width_m per line when
    // charge_crossing is set.
    double travel_distance_m(PlantIndex a, PlantIndex b) const;

  private:
    FieldSpec spec_;
    int plants_per_row_ = 0;
    int num_planting_rows_ = 0;
    int num_plant_lines_ = 0;
};

// build_grid per the module contract; FieldGrid::build is the implementation.
inline FieldGrid build_grid(const FieldSpec& spec) { return FieldGrid::build(spec); }

double travel_time_s(const FieldGrid& grid, double speed_m_per_s, PlantIndex a, PlantIndex b);

// Perimeter plants: the edge lines plus the row-end plants beside the
// headland paths. 1 = boundary.
std::vector<std::uint8_t> boundary_mask(const FieldGrid& grid);

}  // namespace pestscout
