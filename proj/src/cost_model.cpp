#include "pestscout/cost_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pestscout {

DetectionCurve DetectionCurve::reference() {
    // 40 s exactly gives 0.84; anything longer 0.90.
    const double just_over_40 = std::nextafter(40.0, std::numeric_limits<double>::infinity());
    return DetectionCurve{{{0.0, 0.0},
                           {20.0, 0.50},
                           {25.0, 0.60},
                           {30.0, 0.69},
                           {35.0, 0.77},
                           {40.0, 0.84},
                           {just_over_40, 0.90}}};
}

DetectionCurve DetectionCurve::flat(double p) {
    return DetectionCurve{{{0.0, p}}};
}

bool DetectionCurve::valid() const {
    if (steps.empty()) return false;
    double prev_t = -1.0, prev_p = -1.0;
    for (const auto& [t, p] : steps) {
        if (t <= prev_t || p < prev_p || p < 0.0 || p > 1.0) return false;
        prev_t = t;
        prev_p = p;
    }
    return steps.front().first <= 0.0;
}

double DetectionCurve::probability(double t_seconds) const {
    if (t_seconds < 0) throw std::invalid_argument("inspection time must be non-negative");
    double value = 0.0;
    for (const auto& [t, p] : steps) {
        if (t_seconds >= t) value = p;
        else break;
    }
    return value;
}

double detection_probability(const DetectionCurve& curve, double t_seconds) {
    return curve.probability(t_seconds);
}

CostModel CostModel::chapter4_defaults() {
    CostModel c;
    c.day_budget_s = 7200.0;
    c.detection_mode = DetectionMode::deterministic;
    return c;
}

CostModel CostModel::chapter5_defaults() {
    CostModel c;
    c.day_budget_s = 12.0 * 3600.0;
    c.inspect_seconds = 40.0;
    c.detection_mode = DetectionMode::probabilistic;
    return c;
}

double CostModel::vp_time(int viewpoints) const {
    if (viewpoints < 1 || viewpoints > 3) {
        throw std::invalid_argument("viewpoint count must be 1, 2 or 3");
    }
    return vp_times_s[viewpoints - 1];
}

void CostModel::validate() const {
    if (speed_m_per_s <= 0) throw std::invalid_argument("speed must be positive");
    for (double t : vp_times_s)
        if (t < 0) throw std::invalid_argument("viewpoint times must be non-negative");
    if (turn90_s < 0 || turn180_s < 0 || between_rows_s < 0 || inspect_seconds < 0) {
        throw std::invalid_argument("times must be non-negative");
    }
    if (day_budget_s <= 0) throw std::invalid_argument("day budget must be positive");
    if (!curve.valid()) throw std::invalid_argument("detection curve must be a non-decreasing step table in [0,1]");
}

double step_cost(const CostModel& cost, double plant_spacing_m, const Step& step) {
    const double travel = plant_spacing_m / cost.speed_m_per_s;
    switch (step.kind) {
        case Step::Kind::advance_and_inspect:
            return travel + cost.vp_time(step.viewpoints) + (cost.deduct_turn90 ? cost.turn90_s : 0.0);
        case Step::Kind::pair_inspect:
            return travel + 2.0 * cost.vp_time(step.viewpoints) + cost.turn180_s;
        case Step::Kind::end_of_row_next:
            return cost.between_rows_s;
        case Step::Kind::end_of_row_same:
            return cost.turn180_s;
        case Step::Kind::dynamic_move:
            return step.distance_m / cost.speed_m_per_s + cost.inspect_seconds;
    }
    throw std::invalid_argument("unknown step kind");
}

}  // namespace pestscout
