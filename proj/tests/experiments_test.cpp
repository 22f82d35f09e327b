#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "pestscout/csv.hpp"
#include "pestscout/experiments.hpp"

using namespace pestscout;

namespace {

Scenario tiny_scenario(int reps) {
    Scenario s;
    s.name = "tiny";
    s.base.mode = Mode::chapter4;
    s.base.field.plant_count = 36;
    s.base.spread = SpreadParams{0.3, 0.3, false};
    s.base.cost = CostModel::chapter4_defaults();
    s.base.cost.day_budget_s = 900.0;
    s.base.days = 3;
    s.base.seed = 9;
    s.repetitions = reps;
    s.policies = {{PolicyKind::snake_every, 1, 4}, {PolicyKind::neighbor_every, 1, 4}};
    return s;
}

}  // namespace

TEST_CASE("summarize basics") {
    StatSummary s = summarize({1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(s.median == 3.0);
    CHECK(s.stddev == doctest::Approx(std::sqrt(2.5)));
    StatSummary one = summarize({7.0});
    CHECK(one.mean == 7.0);
    CHECK(one.stddev == 0.0);
    CHECK(one.median == 7.0);
    // Unattained thresholds participate as infinity.
    StatSummary inf = summarize({2.0, std::numeric_limits<double>::infinity(), 1.0});
    CHECK(inf.median == 2.0);
}

TEST_CASE("single repetition aggregate equals the run") {
    Scenario s = tiny_scenario(1);
    AggregateReport agg = run_scenario(s);
    REQUIRE(agg.policies.size() == 2);
    for (const auto& p : agg.policies) {
        REQUIRE(p.runs.size() == 1);
        const RunReport& run = p.runs[0];
        CHECK(p.pvv_all.mean == run.pvv_all);
        CHECK(p.pvv_all.median == run.pvv_all);
        CHECK(p.pvv_all.stddev == 0.0);
        CHECK(p.pcd_all.mean == run.pcd_all);
        for (std::size_t d = 0; d < run.days.size(); ++d) {
            CHECK(p.days[d].visited_pct.mean == run.days[d].visited_pct);
        }
    }
}

TEST_CASE("repetition seeds are paired across policies") {
    Scenario s = tiny_scenario(4);
    AggregateReport agg = run_scenario(s);
    for (int rep = 0; rep < 4; ++rep) {
        CHECK(agg.policies[0].runs[rep].seed == agg.policies[1].runs[rep].seed);
        CHECK(agg.policies[0].runs[rep].initial_insects ==
              agg.policies[1].runs[rep].initial_insects);
    }
    // Distinct repetitions see distinct seeds.
    CHECK(agg.policies[0].runs[0].seed != agg.policies[0].runs[1].seed);
}

TEST_CASE("parallel execution reproduces the sequential aggregate") {
    Scenario s = tiny_scenario(6);
    AggregateReport sequential = run_scenario(s, 1);
    AggregateReport parallel = run_scenario(s, 4);
    CHECK(results_csv(sequential) == results_csv(parallel));
    CHECK(summary_csv(sequential) == summary_csv(parallel));
}

TEST_CASE("rerunning a scenario reproduces every statistic") {
    Scenario s = tiny_scenario(3);
    AggregateReport a = run_scenario(s);
    AggregateReport b = run_scenario(s);
    CHECK(a.policies[0].pcd_all.mean == b.policies[0].pcd_all.mean);
    CHECK(a.policies[0].pcd_all.stddev == b.policies[0].pcd_all.stddev);
    CHECK(a.policies[1].d100.median_day == b.policies[1].d100.median_day);
}

TEST_CASE("degenerate sweep values give identical aggregates") {
    SweepSpec sweep;
    sweep.axis = SweepAxis::severity;
    sweep.values = {0.0, 0.0, 0.0};
    sweep.base = tiny_scenario(2);
    auto reports = run_sweep(sweep);
    REQUIRE(reports.size() == 3);
    CHECK(results_csv(reports[0]) == results_csv(reports[1]));
    CHECK(results_csv(reports[1]) == results_csv(reports[2]));
}

TEST_CASE("sweep axes reach the right knobs") {
    SimConfig base = tiny_scenario(1).base;

    SimConfig sev = apply_axis(base, SweepAxis::severity, 0.8);
    CHECK(sev.spread.severity == 0.8);

    SimConfig inspect = apply_axis(base, SweepAxis::inspect_seconds, 20.0);
    CHECK(inspect.cost.inspect_seconds == 20.0);

    SimConfig rate = apply_axis(base, SweepAxis::detection_rate, 0.4);
    CHECK(rate.cost.curve.probability(100.0) == 0.4);

    SimConfig skip = apply_axis(base, SweepAxis::skip_n, 3.0);
    CHECK(skip.policy.n == 3);

    SimConfig ch4_size = apply_axis(base, SweepAxis::field_size, 8.0);
    CHECK(ch4_size.field.area_dunam == 8.0);
    CHECK(!ch4_size.field.plant_count.has_value());

    SimConfig ch5 = base;
    ch5.mode = Mode::chapter5;
    ch5.field.plant_spacing_m = 3.0;
    ch5.field.row_width_m = 4.0;
    SimConfig ch5_size = apply_axis(ch5, SweepAxis::field_size, 6.0);
    CHECK(ch5_size.field.plant_count == 5000);
}

TEST_CASE("seeds pair across sweep values") {
    SweepSpec sweep;
    sweep.axis = SweepAxis::severity;
    sweep.values = {0.1, 0.9};
    sweep.base = tiny_scenario(3);
    sweep.base.policies = {{PolicyKind::snake_every, 1, 4}};
    auto reports = run_sweep(sweep);
    for (int rep = 0; rep < 3; ++rep) {
        CHECK(reports[0].policies[0].runs[rep].initial_insects ==
              reports[1].policies[0].runs[rep].initial_insects);
    }
}

TEST_CASE("reference scenario bases") {
    FieldGrid a = build_grid(chapter4_base('A').field);
    CHECK(a.total_plants() == 500);
    FieldGrid b = build_grid(chapter4_base('B').field);
    CHECK(b.plants_per_row() == 66);  // floor(200/3)
    FieldGrid c = build_grid(chapter4_base('C').field);
    CHECK(c.plants_per_row() == 100);
    CHECK(chapter4_base('A').cost.day_budget_s == 7200.0);
    CHECK_THROWS_AS(chapter4_base('X'), std::invalid_argument);

    FieldGrid a5 = build_grid(chapter5_base('A').field);
    CHECK(a5.total_plants() == 784);
    FieldGrid c5 = build_grid(chapter5_base('C').field);
    CHECK(c5.total_plants() == 8282);
    CHECK(chapter5_base('B').cost.detection_mode == DetectionMode::probabilistic);
    CHECK(chapter5_base('B').cluster_seed.has_value());

    Scenario cmp = chapter5_comparison('A', 5, 1);
    CHECK(cmp.policies.size() == 3);
    CHECK(cmp.repetitions == 5);
}
