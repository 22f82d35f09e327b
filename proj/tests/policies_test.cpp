#include <doctest.h>

#include <stdexcept>

#include <set>

#include "pestscout/engine.hpp"
#include "pestscout/policies.hpp"
#include "pestscout/rng.hpp"
#include "test_support.hpp"

using namespace pestscout;

namespace {

FieldGrid grid_for_count(int count, double spacing = 2.0, double width = 3.5) {
    FieldSpec spec;
    spec.plant_spacing_m = spacing;
    spec.row_width_m = width;
    spec.plant_count = count;
    return build_grid(spec);
}

SimConfig tiny_config(PolicyKind kind, int plant_count, int days = 1) {
    SimConfig c;
    c.mode = Mode::chapter4;
    c.field.plant_count = plant_count;
    c.field.plant_spacing_m = 2.0;
    c.field.row_width_m = 3.5;
    c.spread = SpreadParams{0.0, 0.0, false};
    c.cost = CostModel::chapter4_defaults();
    c.cost.day_budget_s = 1e9;  // effectively unlimited
    c.policy.kind = kind;
    c.days = days;
    c.seed = 11;
    return c;
}

// Runs a sim collecting the day-1 inspection order as linear ids (pairs
// contribute target then partner).
std::vector<int> day1_visit_order(const SimConfig& config) {
    std::vector<int> order;
    RunHooks hooks;
    hooks.proposed = [&](const StepEvent& ev) {
        if (ev.day != 1 || !ev.action->is_inspection()) return;
        order.push_back(ev.grid->to_linear(ev.action->target));
        if (ev.action->kind == Action::Kind::inspect_pair) {
            order.push_back(ev.grid->to_linear(ev.action->partner));
        }
    };
    run_simulation(config, &hooks);
    return order;
}

std::vector<Action::Kind> day1_action_kinds(const SimConfig& config) {
    std::vector<Action::Kind> kinds;
    RunHooks hooks;
    hooks.proposed = [&](const StepEvent& ev) {
        if (ev.day == 1) kinds.push_back(ev.action->kind);
    };
    run_simulation(config, &hooks);
    return kinds;
}

}  // namespace

TEST_CASE("snake_every on a 2x3 grid visits the linear order") {
    // Hand trace: the cursor walks line 0 slots 0..2, turns, walks line 1.
    SimConfig c = tiny_config(PolicyKind::snake_every, 6);
    CHECK(day1_visit_order(c) == std::vector<int>{0, 1, 2, 3, 4, 5});

    auto kinds = day1_action_kinds(c);
    // inspect x3, end-of-row, inspect x3 (the trailing turn is not reached
    // because the day ends once every plant is visited).
    REQUIRE(kinds.size() >= 7);
    CHECK(kinds[0] == Action::Kind::inspect_single);
    CHECK(kinds[3] == Action::Kind::end_of_row);
    CHECK(kinds[4] == Action::Kind::inspect_single);
}

TEST_CASE("snake_every_n strides and restarts from the least-visited tail") {
    // 2x4 grid, stride 2: forward 0,2,4,6; restart window {6,7} -> 7 (count
    // 0); backward 7,5,3,1.
    SimConfig c = tiny_config(PolicyKind::snake_every_n, 8);
    c.policy.n = 2;
    CHECK(day1_visit_order(c) == std::vector<int>{0, 2, 4, 6, 7, 5, 3, 1});
}

TEST_CASE("neighbor_every covers edge lines singly and pairs the interior") {
    // 4 lines x 3 slots. Line 0 alone, then the facing pair (1,2), then
    // line 3. Spec'd first pair action: (line 1 slot 0, line 2 slot 0).
    SimConfig c = tiny_config(PolicyKind::neighbor_every, 12);
    CHECK(day1_visit_order(c) ==
          std::vector<int>{0, 1, 2, 3, 6, 4, 7, 5, 8, 9, 10, 11});

    auto kinds = day1_action_kinds(c);
    REQUIRE(kinds.size() >= 10);
    CHECK(kinds[0] == Action::Kind::inspect_single);
    CHECK(kinds[3] == Action::Kind::end_of_row);
    CHECK(kinds[4] == Action::Kind::inspect_pair);
}

TEST_CASE("neighbor_every_n strides through stations with residue") {
    // 4 lines x 4 slots, stride 2. Forward: line0 {0,2}, pair slots {0,2},
    // line3 {0,2}; restart on the tail of line 3 -> slot 3; backward mirrors.
    SimConfig c = tiny_config(PolicyKind::neighbor_every_n, 16);
    c.policy.n = 2;
    CHECK(day1_visit_order(c) ==
          std::vector<int>{0, 2, 4, 8, 6, 10, 12, 14, 15, 13, 7, 11, 5, 9, 3, 1});
}

TEST_CASE("admission guards match the reference scripts") {
    FieldGrid grid = grid_for_count(500);
    CostModel cost = CostModel::chapter4_defaults();
    EngineView view;
    view.grid = &grid;
    view.cost = &cost;

    auto snake = make_policy({PolicyKind::snake_every, 1, 4}, grid);
    CHECK(snake->admission_guard(view).value() == doctest::Approx(36.62).epsilon(1e-9));
    auto neighbor = make_policy({PolicyKind::neighbor_every, 1, 4}, grid);
    CHECK(neighbor->admission_guard(view).value() == doctest::Approx(34.56).epsilon(1e-9));
    auto dynamic = make_policy({PolicyKind::dynamic_sampling, 2, 4}, grid);
    CHECK(!dynamic->admission_guard(view).has_value());
    auto naive = make_policy({PolicyKind::naive, 1, 4}, grid);
    CHECK(!naive->admission_guard(view).has_value());
}

TEST_CASE("cursor persists across days") {
    // Budget for exactly 3 snake steps: the guard needs time_left - 36.62 > 0
    // before each one.
    SimConfig c = tiny_config(PolicyKind::snake_every, 36, 2);
    c.cost.day_budget_s = 3 * 26.62 + 36.0;  // admits exactly 3 inspections
    std::vector<std::pair<int, int>> visits;  // (day, id)
    RunHooks hooks;
    hooks.proposed = [&](const StepEvent& ev) {
        if (ev.action->is_inspection())
            visits.push_back({ev.day, ev.grid->to_linear(ev.action->target)});
    };
    run_simulation(c, &hooks);
    REQUIRE(visits.size() >= 5);
    CHECK(visits[0] == std::pair<int, int>{1, 0});
    CHECK(visits[1] == std::pair<int, int>{1, 1});
    CHECK(visits[2] == std::pair<int, int>{1, 2});
    CHECK(visits[3].first == 2);
    CHECK(visits[3].second == 3);
}

TEST_CASE("random_fraction draws a fresh day sample of exact size") {
    SimConfig c = tiny_config(PolicyKind::random_fraction, 60, 3);
    c.policy.n = 4;
    std::vector<std::set<int>> per_day(4);
    RunHooks hooks;
    hooks.proposed = [&](const StepEvent& ev) {
        if (ev.action->is_inspection())
            per_day[ev.day].insert(ev.grid->to_linear(ev.action->target));
    };
    RunReport report = run_simulation(c, &hooks);
    for (int day = 1; day <= 3; ++day) {
        CHECK(per_day[day].size() == 15);  // ceil(60/4)
        CHECK(report.days[day - 1].visited_count == 15);
    }
    // Fresh draws: it would be astronomically unlikely for all three days to
    // pick the same sample.
    CHECK((per_day[1] != per_day[2] || per_day[2] != per_day[3]));
}

TEST_CASE("bouncy passes alternate halves") {
    SimConfig c = tiny_config(PolicyKind::bouncy, 36);
    c.mode = Mode::chapter5;
    c.cost = CostModel::chapter5_defaults();
    c.cost.day_budget_s = 1e9;
    c.policy.n = 2;
    auto order = day1_visit_order(c);
    REQUIRE(order.size() == 36);
    std::set<int> first_pass(order.begin(), order.begin() + 18);
    std::set<int> second_pass(order.begin() + 18, order.end());
    CHECK(first_pass.size() == 18);
    CHECK(second_pass.size() == 18);
    for (int id : first_pass) CHECK(second_pass.count(id) == 0);
}

TEST_CASE("naive serpentine keeps consecutive stops physically local") {
    SimConfig c = tiny_config(PolicyKind::naive, 60);
    c.mode = Mode::chapter5;
    c.cost = CostModel::chapter5_defaults();
    c.cost.day_budget_s = 1e9;
    FieldGrid grid = build_grid(c.field);
    auto order = day1_visit_order(c);
    REQUIRE(order.size() == 60);
    const double limit = c.field.plant_spacing_m + c.field.row_width_m + 1e-9;
    for (std::size_t i = 1; i < order.size(); ++i) {
        CHECK(grid.travel_distance_m(grid.from_linear(order[i - 1]),
                                     grid.from_linear(order[i])) <= limit);
    }
}

TEST_CASE("an unlimited day terminates and logs each plant at most once") {
    // Wasteful re-treads happen when a bouncing traversal crosses ground it
    // already covered (that is the reference behavior and the source of the
    // day-2 coverage dip); the visit log and the day metrics count distinct
    // plants only, and the day ends once everything has been seen.
    for (PolicyKind kind :
         {PolicyKind::snake_every, PolicyKind::snake_every_n, PolicyKind::snake_online_random,
          PolicyKind::neighbor_every_n, PolicyKind::neighbor_online_random,
          PolicyKind::neighbor_every, PolicyKind::random_fraction, PolicyKind::naive,
          PolicyKind::bouncy, PolicyKind::dynamic_sampling}) {
        SimConfig c = tiny_config(kind, 20);
        c.spread = SpreadParams{0.4, 0.0, false};
        std::vector<int> order;
        RunHooks hooks;
        hooks.proposed = [&](const StepEvent& ev) {
            if (ev.day != 1 || !ev.action->is_inspection()) return;
            order.push_back(ev.grid->to_linear(ev.action->target));
            if (ev.action->kind == Action::Kind::inspect_pair) {
                order.push_back(ev.grid->to_linear(ev.action->partner));
            }
        };
        RunReport report = run_simulation(c, &hooks);
        std::set<int> seen(order.begin(), order.end());
        CHECK(report.days[0].visited_count == static_cast<int>(seen.size()));
        CHECK(report.days[0].visited_count <= 20);
    }
}

TEST_CASE("deterministic-stride policies never re-inspect within a day") {
    for (PolicyKind kind : {PolicyKind::snake_every, PolicyKind::neighbor_every,
                            PolicyKind::random_fraction, PolicyKind::naive, PolicyKind::bouncy,
                            PolicyKind::dynamic_sampling}) {
        SimConfig c = tiny_config(kind, 20);
        c.spread = SpreadParams{0.4, 0.0, false};
        auto order = day1_visit_order(c);
        std::set<int> seen(order.begin(), order.end());
        CHECK(seen.size() == order.size());
    }
}

TEST_CASE("full-coverage policies cover everything in one unlimited day") {
    for (PolicyKind kind : {PolicyKind::snake_every, PolicyKind::neighbor_every,
                            PolicyKind::naive, PolicyKind::dynamic_sampling}) {
        SimConfig c = tiny_config(kind, 36);
        if (kind == PolicyKind::naive || kind == PolicyKind::dynamic_sampling) {
            c.mode = Mode::chapter5;
            c.cost = CostModel::chapter5_defaults();
            c.cost.day_budget_s = 1e9;
            c.cost.detection_mode = DetectionMode::deterministic;
        }
        RunReport report = run_simulation(c);
        CHECK(report.days[0].visited_count == 36);
    }
}

TEST_CASE("dynamic pops the nearest open plant, verified by brute force") {
    SimConfig c;
    c.mode = Mode::chapter5;
    c.field.plant_count = 180;  // 12 lines x 15 slots
    c.field.plant_spacing_m = 3.0;
    c.field.row_width_m = 4.0;
    c.spread = SpreadParams{0.15, 0.5, false};
    c.cost = CostModel::chapter5_defaults();
    c.policy.kind = PolicyKind::dynamic_sampling;
    c.days = 3;
    c.seed = 23;

    int pops = 0;
    RunHooks hooks;
    hooks.proposed = [&](const StepEvent& ev) {
        if (!ev.action->is_inspection()) return;
        auto* diag = dynamic_diagnostics(*ev.policy);
        REQUIRE(diag != nullptr);
        auto open = diag->open_list();
        int expected = pestscout::testing::nearest_oracle(*ev.grid, ev.position_before, open);
        CHECK(ev.grid->to_linear(ev.action->target) == expected);
        ++pops;
    };
    run_simulation(c, &hooks);
    CHECK(pops > 100);
}

TEST_CASE("dynamic first pop is the boundary plant nearest the start corner") {
    SimConfig c = tiny_config(PolicyKind::dynamic_sampling, 36);
    c.mode = Mode::chapter5;
    c.cost = CostModel::chapter5_defaults();
    c.spread = SpreadParams{0.0, 0.0, false};
    auto order = day1_visit_order(c);
    REQUIRE(!order.empty());
    // The depot corner itself is a boundary plant at distance zero.
    CHECK(order[0] == 0);
}

TEST_CASE("dynamic open list tracks detections") {
    FieldGrid grid = grid_for_count(36, 3.0, 4.0);
    auto policy = make_policy({PolicyKind::dynamic_sampling, 2, 4}, grid);
    auto* diag = dynamic_diagnostics(*policy);
    REQUIRE(diag != nullptr);

    std::vector<std::uint8_t> visited_today(grid.total_plants(), 0);
    std::vector<int> counts(grid.total_plants(), 0);
    std::vector<std::uint8_t> ever(grid.total_plants(), 0);
    CostModel cost = CostModel::chapter5_defaults();
    auto rng = make_stream(1, RngStream::policy);
    EngineView view;
    view.grid = &grid;
    view.cost = &cost;
    view.visited_today = &visited_today;
    view.visit_counts = &counts;
    view.visited_ever = &ever;
    view.rng = &rng;

    CHECK(diag->open_list().empty());
    // Detection on an interior plant pushes its whole neighbor set.
    policy->on_detection(view, {1, 2});
    CHECK(diag->open_list().size() == 3);
    // Neighbors already closed today are not pushed again.
    visited_today[grid.to_linear({3, 3})] = 1;
    visited_today[grid.to_linear({3, 5})] = 1;
    policy->on_detection(view, {3, 4});
    auto open = diag->open_list();
    CHECK(open.size() == 4);  // only the facing plant (4,4) joined
    // Re-detection adds nothing new.
    policy->on_detection(view, {1, 2});
    CHECK(diag->open_list().size() == 4);
}

TEST_CASE("dynamic open and close lists stay disjoint") {
    SimConfig c;
    c.mode = Mode::chapter5;
    c.field.plant_count = 60;
    c.field.plant_spacing_m = 3.0;
    c.field.row_width_m = 4.0;
    c.spread = SpreadParams{0.2, 0.5, false};
    c.cost = CostModel::chapter5_defaults();
    c.policy.kind = PolicyKind::dynamic_sampling;
    c.days = 3;
    c.seed = 31;

    std::set<int> closed_today;
    int current_day = 1;
    RunHooks hooks;
    hooks.applied = [&](const StepEvent& ev) {
        if (ev.day != current_day) {
            closed_today.clear();
            current_day = ev.day;
        }
        if (ev.action->is_inspection()) closed_today.insert(ev.grid->to_linear(ev.action->target));
        for (int open_id : dynamic_diagnostics(*ev.policy)->open_list()) {
            CHECK(closed_today.count(open_id) == 0);
        }
    };
    run_simulation(c, &hooks);
}

TEST_CASE("policy spec validation") {
    PolicySpec bad;
    bad.kind = PolicyKind::random_fraction;
    bad.n = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.kind = PolicyKind::snake_every_n;
    bad.n = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.n = 2;
    bad.max_skip = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("policy names round-trip") {
    for (const auto& name : policy_names()) {
        auto kind = policy_kind_from_name(name);
        REQUIRE(kind.has_value());
        PolicySpec spec;
        spec.kind = *kind;
        CHECK(spec.name() == name);
    }
    CHECK(!policy_kind_from_name("zigzag").has_value());
}
