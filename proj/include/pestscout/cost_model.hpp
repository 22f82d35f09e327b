#pragma once

#include <array>
#include <utility>
#include <vector>

namespace pestscout {

// Inspection-time -> detection-probability step curve. probability(t) is the
// value of the step with the largest threshold <= t.
struct DetectionCurve {
    std::vector<std::pair<double, double>> steps;  // (min_seconds, probability), sorted

    static DetectionCurve reference();
    static DetectionCurve flat(double p);

    double probability(double t_seconds) const;
    bool valid() const;
};

double detection_probability(const DetectionCurve& curve, double t_seconds);

enum class DetectionMode { deterministic, probabilistic };

// All robot timing constants. Immutable value object, freely shareable.
struct CostModel {
    double speed_m_per_s = 2.5 * 1000.0 / 3600.0;
    std::array<double, 3> vp_times_s = {4.34, 16.14, 23.74};  // 1..3 viewpoints
    double turn90_s = 10.0;
    double turn180_s = 23.0;
    double between_rows_s = 25.0;
    double day_budget_s = 7200.0;
    double inspect_seconds = 40.0;  // per-plant stop time for timed policies
    DetectionMode detection_mode = DetectionMode::deterministic;
    DetectionCurve curve = DetectionCurve::reference();
    // The reference traversal loops reserve a 90-degree turn in their
    // admission guard without ever spending it; this flag makes the
    // deduction include it too.
    bool deduct_turn90 = false;

    static CostModel chapter4_defaults();
    static CostModel chapter5_defaults();

    double vp_time(int viewpoints) const;
    void validate() const;
};

struct Step {
    enum class Kind {
        advance_and_inspect,  // move one spacing, inspect one side
        pair_inspect,         // move one spacing, inspect both sides, 180-turn
        end_of_row_next,      // leave the corridor for the next one
        end_of_row_same,      // U-turn within the corridor
        dynamic_move,         // timed drive to an arbitrary plant + inspection
    };
    Kind kind;
    int viewpoints = 0;    // for the inspect kinds
    double distance_m = 0;  // for dynamic_move
};

double step_cost(const CostModel& cost, double plant_spacing_m, const Step& step);

}  // namespace pestscout
