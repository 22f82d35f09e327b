#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pestscout/engine.hpp"

namespace pestscout {

struct StatSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double median = 0.0;
};

// Sample statistics; median of an even count averages the middle pair when
// both are finite, otherwise takes the upper one.
StatSummary summarize(std::vector<double> values);

struct Scenario {
    std::string name;
    SimConfig base;  // base.policy is ignored; policies below are compared
    int repetitions = 10;
    std::vector<PolicySpec> policies;
};

enum class SweepAxis { field_size, severity, inspect_seconds, detection_rate, skip_n };

std::string sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_name(const std::string& name);

struct SweepSpec {
    SweepAxis axis = SweepAxis::severity;
    std::vector<double> values;
    Scenario base;

    void validate() const;
};

struct DayAggregate {
    int day = 0;
    StatSummary visited_pct, pcd_ed, cum_detection_pct, time_used_s;
};

struct ThresholdAggregate {
    double attained_fraction = 0.0;
    // Median first-day over all repetitions, counting unattained runs as
    // +infinity.
    double median_day = 0.0;
};

struct PolicyAggregate {
    std::string policy;
    std::vector<DayAggregate> days;
    StatSummary pvv_all, pcd_all, md;
    ThresholdAggregate d30, d50, d80, d100;
    std::vector<RunReport> runs;  // one per repetition, in repetition order
};

struct AggregateReport {
    std::string scenario_name;
    std::vector<PolicyAggregate> policies;
};

// Runs repetitions x policies with paired seeds: repetition r sees the same
// initial infestation under every policy.
AggregateReport run_scenario(const Scenario& scenario, int jobs = 1);

// One aggregate per axis value; seeds are paired across values.
std::vector<AggregateReport> run_sweep(const SweepSpec& sweep, int jobs = 1);

SimConfig apply_axis(SimConfig config, SweepAxis axis, double value);

// Reference scenario bases. Chapter 4: the three field sizes of the
// traversal study. Chapter 5: plant-count-pinned analogs with clustered
// boundary infestations standing in for survey data.
SimConfig chapter4_base(char scenario);  // 'A', 'B', 'C'
SimConfig chapter5_base(char scenario);  // 'A', 'B', 'C'

// Policy sets used in the comparisons.
std::vector<PolicySpec> chapter4_policy_set();
std::vector<PolicySpec> chapter5_policy_set();

Scenario chapter4_comparison(char scenario, int repetitions, std::uint64_t seed);
Scenario chapter5_comparison(char scenario, int repetitions, std::uint64_t seed);

}  // namespace pestscout
