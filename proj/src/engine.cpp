#include "pestscout/engine.hpp"

#include <stdexcept>

#include "pestscout/rng.hpp"

namespace pestscout {

std::string mode_name(Mode mode) {
    return mode == Mode::chapter4 ? "chapter4" : "chapter5";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    if (name == "chapter4") return Mode::chapter4;
    if (name == "chapter5") return Mode::chapter5;
    return std::nullopt;
}

void SimConfig::validate() const {
    cost.validate();
    spread.validate();
    policy.validate();
    if (days < 1) throw std::invalid_argument("days must be >= 1");
    if (warmup_days < 0) throw std::invalid_argument("warmup_days must be >= 0");
    if (cluster_seed) {
        if (cluster_seed->clusters < 1) throw std::invalid_argument("clusters must be >= 1");
        if (cluster_seed->growth_steps < 0)
            throw std::invalid_argument("cluster_growth_steps must be >= 0");
        if (cluster_seed->growth_severity < 0 || cluster_seed->growth_severity > 1)
            throw std::invalid_argument("cluster_growth_severity must be in [0,1]");
    }
    build_grid(field);  // field invariants
}

long long detection_denominator(long long initial, const std::vector<int>& new_per_day,
                                bool exclude_final_day) {
    long long denom = initial;
    const std::size_t count = new_per_day.size();
    for (std::size_t i = 0; i < count; ++i) {
        if (exclude_final_day && i + 1 == count) break;
        denom += new_per_day[i];
    }
    return denom;
}

namespace {

InfestationState make_initial_state(const SimConfig& config, const FieldGrid& grid,
                                    std::mt19937_64& seeding_rng) {
    InfestationState state;
    if (config.initial_mask) {
        state = seed_from_mask(grid, *config.initial_mask);
    } else if (config.map_file) {
        state = seed_from_map(grid, *config.map_file);
    } else if (config.cluster_seed) {
        state = seed_clustered(grid, config.cluster_seed->clusters,
                               config.cluster_seed->growth_steps,
                               config.cluster_seed->growth_severity, seeding_rng);
    } else {
        state = seed_random(grid, config.spread, seeding_rng);
    }
    for (int i = 0; i < config.warmup_days; ++i) {
        spread_end_of_day(state, grid, config.spread.severity, config.spread.per_edge,
                          seeding_rng);
    }
    if (config.warmup_days > 0) state.rebase();
    return state;
}

double detection_chance(const CostModel& cost, const Action& action) {
    if (cost.detection_mode == DetectionMode::deterministic) return 1.0;
    const double seconds = action.step_kind == Step::Kind::dynamic_move
                               ? cost.inspect_seconds
                               : cost.vp_time(action.viewpoints);
    return cost.curve.probability(seconds);
}

}  // namespace

RunReport run_simulation(const SimConfig& config, const RunHooks* hooks) {
    config.validate();
    const FieldGrid grid = build_grid(config.field);
    const int total = grid.total_plants();

    auto seeding_rng = make_stream(config.seed, RngStream::seeding);
    auto spread_rng = make_stream(config.seed, RngStream::spread);
    auto policy_rng = make_stream(config.seed, RngStream::policy);
    auto detection_rng = make_stream(config.seed, RngStream::detection);

    InfestationState state = make_initial_state(config, grid, seeding_rng);
    auto policy = make_policy(config.policy, grid);

    std::vector<int> visit_counts(total, 0);
    std::vector<std::uint8_t> visited_ever(total, 0);
    std::vector<std::uint8_t> visited_today(total, 0);

    RunReport report;
    report.policy_name = config.policy.display_name();
    report.seed = config.seed;
    report.total_plants = total;
    report.initial_insects = state.cumulative_total();

    long long denominator = state.cumulative_total();
    PlantIndex position{0, 0};

    for (int day = 1; day <= config.days; ++day) {
        std::fill(visited_today.begin(), visited_today.end(), 0);
        int today_count = 0;
        int detections_today = 0;
        double time_left = config.cost.day_budget_s;
        double time_used = 0.0;
        const int day_start_bugs = state.infested_count();

        EngineView view;
        view.grid = &grid;
        view.cost = &config.cost;
        view.day = day;
        view.position = position;
        view.visited_today = &visited_today;
        view.visited_today_count = 0;
        view.visit_counts = &visit_counts;
        view.visited_ever = &visited_ever;
        view.rng = &policy_rng;
        view.time_left_s = time_left;

        policy->on_day_start(view);

        while (today_count < total) {
            view.time_left_s = time_left;
            view.position = position;
            view.visited_today_count = today_count;

            Action action = policy->next_action(view);
            if (action.kind == Action::Kind::day_done) break;
            const double guard = policy->admission_guard(view).value_or(action.cost_s);
            if (time_left - guard <= 0) break;

            time_left -= action.cost_s;
            time_used += action.cost_s;

            if (hooks && hooks->proposed) {
                StepEvent ev{day, &action, policy.get(), &state, &grid, position, time_left};
                hooks->proposed(ev);
            }

            if (action.is_inspection()) {
                PlantIndex targets[2] = {action.target, action.partner};
                const int n_targets = action.kind == Action::Kind::inspect_pair ? 2 : 1;
                for (int t = 0; t < n_targets; ++t) {
                    const int id = grid.to_linear(targets[t]);
                    ++visit_counts[id];
                    visited_ever[id] = 1;
                    if (!visited_today[id]) {
                        visited_today[id] = 1;
                        ++today_count;
                    }
                    view.visited_today_count = today_count;
                    if (state.infested(id)) {
                        const double p = detection_chance(config.cost, action);
                        const bool detected =
                            config.cost.detection_mode == DetectionMode::deterministic
                                ? true
                                : chance(detection_rng, p);
                        if (detected) {
                            state.destroy(id);
                            ++detections_today;
                            policy->on_detection(view, targets[t]);
                        }
                    }
                }
                position = action.target;
            }

            policy->commit(view, action);

            if (hooks && hooks->applied) {
                StepEvent ev{day, &action, policy.get(), &state, &grid, position, time_left};
                hooks->applied(ev);
            }
        }

        DayReport dr;
        dr.day = day;
        dr.visited_count = today_count;
        dr.visited_pct = 100.0 * today_count / total;
        dr.detections = detections_today;
        dr.detection_pct_of_day_start =
            day_start_bugs > 0 ? 100.0 * detections_today / day_start_bugs : 0.0;
        dr.time_used_s = time_used;
        dr.cumulative_detection_pct =
            denominator > 0 ? 100.0 * static_cast<double>(state.detected_total()) /
                                  static_cast<double>(denominator)
                            : 100.0;

        const int new_bugs = spread_end_of_day(state, grid, config.spread.severity,
                                               config.spread.per_edge, spread_rng);
        dr.new_bugs_after_day = new_bugs;
        if (day != config.days) denominator += new_bugs;
        report.days.push_back(dr);
        if (hooks && hooks->day_end) hooks->day_end(day, state);
    }

    int ever = 0;
    for (auto v : visited_ever) ever += v;
    report.pvv_all = 100.0 * ever / total;
    report.pcd_all = report.days.empty() ? 0.0 : report.days.back().cumulative_detection_pct;
    report.denominator = denominator;
    report.cumulative_total = state.cumulative_total();
    report.detected_total = state.detected_total();
    report.md = denominator - state.detected_total();

    for (const auto& dr : report.days) {
        const double pct = dr.cumulative_detection_pct;
        if (!report.d30 && pct >= 30.0 - 1e-9) report.d30 = dr.day;
        if (!report.d50 && pct >= 50.0 - 1e-9) report.d50 = dr.day;
        if (!report.d80 && pct >= 80.0 - 1e-9) report.d80 = dr.day;
        if (!report.d100 && pct >= 100.0 - 1e-9) report.d100 = dr.day;
    }
    return report;
}

}  // namespace pestscout
