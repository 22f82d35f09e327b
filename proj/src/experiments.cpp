#include "pestscout/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pestscout/rng.hpp"

namespace pestscout {

StatSummary summarize(std::vector<double> values) {
    StatSummary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / (n - 1.0));
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        s.median = values[mid];
    } else {
        const double lo = values[mid - 1], hi = values[mid];
        s.median = (std::isfinite(lo) && std::isfinite(hi)) ? (lo + hi) / 2.0 : hi;
    }
    return s;
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::field_size: return "field_size";
        case SweepAxis::severity: return "severity";
        case SweepAxis::inspect_seconds: return "inspect_seconds";
        case SweepAxis::detection_rate: return "detection_rate";
        case SweepAxis::skip_n: return "skip_n";
    }
    return "unknown";
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name) {
    for (SweepAxis a : {SweepAxis::field_size, SweepAxis::severity, SweepAxis::inspect_seconds,
                        SweepAxis::detection_rate, SweepAxis::skip_n}) {
        if (sweep_axis_name(a) == name) return a;
    }
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep values must be non-empty");
    if (base.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (base.policies.empty()) throw std::invalid_argument("sweep needs at least one policy");
}

namespace {

ThresholdAggregate aggregate_threshold(const std::vector<RunReport>& runs,
                                       std::optional<int> RunReport::*member) {
    ThresholdAggregate out;
    std::vector<double> days;
    int attained = 0;
    for (const auto& run : runs) {
        const auto& value = run.*member;
        if (value) {
            ++attained;
            days.push_back(static_cast<double>(*value));
        } else {
            days.push_back(std::numeric_limits<double>::infinity());
        }
    }
    out.attained_fraction = runs.empty() ? 0.0 : static_cast<double>(attained) / runs.size();
    out.median_day = summarize(days).median;
    return out;
}

PolicyAggregate aggregate_policy(const std::string& name, std::vector<RunReport> runs) {
    PolicyAggregate agg;
    agg.policy = name;
    std::size_t max_days = 0;
    for (const auto& run : runs) max_days = std::max(max_days, run.days.size());
    for (std::size_t d = 0; d < max_days; ++d) {
        DayAggregate day;
        day.day = static_cast<int>(d) + 1;
        std::vector<double> visited, pcd, cum, used;
        for (const auto& run : runs) {
            if (d >= run.days.size()) continue;
            visited.push_back(run.days[d].visited_pct);
            pcd.push_back(run.days[d].detection_pct_of_day_start);
            cum.push_back(run.days[d].cumulative_detection_pct);
            used.push_back(run.days[d].time_used_s);
        }
        day.visited_pct = summarize(visited);
        day.pcd_ed = summarize(pcd);
        day.cum_detection_pct = summarize(cum);
        day.time_used_s = summarize(used);
        agg.days.push_back(day);
    }
    std::vector<double> pvv, pcd_all, md;
    for (const auto& run : runs) {
        pvv.push_back(run.pvv_all);
        pcd_all.push_back(run.pcd_all);
        md.push_back(static_cast<double>(run.md));
    }
    agg.pvv_all = summarize(pvv);
    agg.pcd_all = summarize(pcd_all);
    agg.md = summarize(md);
    agg.d30 = aggregate_threshold(runs, &RunReport::d30);
    agg.d50 = aggregate_threshold(runs, &RunReport::d50);
    agg.d80 = aggregate_threshold(runs, &RunReport::d80);
    agg.d100 = aggregate_threshold(runs, &RunReport::d100);
    agg.runs = std::move(runs);
    return agg;
}

}  // namespace

AggregateReport run_scenario(const Scenario& scenario, int jobs) {
    if (scenario.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (scenario.policies.empty()) throw std::invalid_argument("scenario needs at least one policy");

    const int n_policies = static_cast<int>(scenario.policies.size());
    const int n_tasks = n_policies * scenario.repetitions;
    std::vector<RunReport> results(n_tasks);

    auto run_task = [&](int task) {
        const int pidx = task / scenario.repetitions;
        const int rep = task % scenario.repetitions;
        SimConfig config = scenario.base;
        config.policy = scenario.policies[pidx];
        config.seed = repetition_seed(scenario.base.seed, rep);
        results[task] = run_simulation(config);
    };

    const int workers = std::max(1, std::min(jobs, n_tasks));
    if (workers == 1) {
        for (int t = 0; t < n_tasks; ++t) run_task(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) run_task(t);
            });
        }
        for (auto& th : pool) th.join();
    }

    AggregateReport report;
    report.scenario_name = scenario.name;
    for (int p = 0; p < n_policies; ++p) {
        std::vector<RunReport> runs(results.begin() + p * scenario.repetitions,
                                    results.begin() + (p + 1) * scenario.repetitions);
        report.policies.push_back(
            aggregate_policy(scenario.policies[p].display_name(), std::move(runs)));
    }
    return report;
}

SimConfig apply_axis(SimConfig config, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::field_size:
            if (config.mode == Mode::chapter4) {
                config.field.area_dunam = value;
                config.field.plant_count.reset();
            } else {
                // Value in hectares; plant count from the default 3 m x 4 m
                // footprint.
                config.field.plant_count =
                    static_cast<int>(std::llround(value * 10000.0 /
                                                  (config.field.plant_spacing_m *
                                                   config.field.row_width_m)));
                config.field.area_dunam = value * 10.0;
            }
            break;
        case SweepAxis::severity:
            config.spread.severity = value;
            break;
        case SweepAxis::inspect_seconds:
            config.cost.inspect_seconds = value;
            break;
        case SweepAxis::detection_rate:
            config.cost.curve = DetectionCurve::flat(value);
            break;
        case SweepAxis::skip_n:
            config.policy.n = static_cast<int>(std::llround(value));
            break;
    }
    return config;
}

std::vector<AggregateReport> run_sweep(const SweepSpec& sweep, int jobs) {
    sweep.validate();
    std::vector<AggregateReport> out;
    for (double value : sweep.values) {
        Scenario scenario = sweep.base;
        scenario.base = apply_axis(scenario.base, sweep.axis, value);
        if (sweep.axis == SweepAxis::skip_n) {
            for (auto& p : scenario.policies) p.n = static_cast<int>(std::llround(value));
        }
        scenario.name = sweep.base.name + "/" + sweep_axis_name(sweep.axis) + "=" +
                        std::to_string(value);
        out.push_back(run_scenario(scenario, jobs));
    }
    return out;
}

SimConfig chapter4_base(char scenario) {
    SimConfig c;
    c.mode = Mode::chapter4;
    c.cost = CostModel::chapter4_defaults();
    c.spread = SpreadParams{0.3, 0.3, false};
    c.days = 3;
    switch (scenario) {
        case 'A':
            c.field = FieldSpec{100.0, 3.5, 2.0, 2.0, std::nullopt, true};
            break;
        case 'B':
            c.field = FieldSpec{200.0, 3.5, 3.0, 4.0, std::nullopt, true};
            break;
        case 'C':
            c.field = FieldSpec{400.0, 3.5, 4.0, 8.0, std::nullopt, true};
            break;
        default:
            throw std::invalid_argument("scenario must be A, B or C");
    }
    return c;
}

SimConfig chapter5_base(char scenario) {
    SimConfig c;
    c.mode = Mode::chapter5;
    c.cost = CostModel::chapter5_defaults();
    c.spread = SpreadParams{0.0, 0.3, false};
    c.days = 25;
    FieldSpec f;
    f.plant_spacing_m = 3.0;
    f.row_width_m = 4.0;
    switch (scenario) {
        case 'A':
            f.plant_count = 784;
            f.area_dunam = 10.0;
            c.cluster_seed = ClusterSeed{2, 2, 0.5};
            break;
        case 'B':
            f.plant_count = 4096;
            f.area_dunam = 50.0;
            c.cluster_seed = ClusterSeed{10, 3, 0.5};
            break;
        case 'C':
            f.plant_count = 8281;
            f.area_dunam = 100.0;
            c.cluster_seed = ClusterSeed{14, 3, 0.5};
            break;
        default:
            throw std::invalid_argument("scenario must be A, B or C");
    }
    f.row_length_m = 1.0;  // synthesized from the plant count
    c.field = f;
    return c;
}

std::vector<PolicySpec> chapter4_policy_set() {
    std::vector<PolicySpec> out;
    out.push_back({PolicyKind::snake_every, 1, 4});
    out.push_back({PolicyKind::snake_every_n, 2, 4});
    out.push_back({PolicyKind::snake_every_n, 3, 4});
    out.push_back({PolicyKind::snake_every_n, 4, 4});
    out.push_back({PolicyKind::snake_online_random, 2, 4});
    out.push_back({PolicyKind::neighbor_every, 1, 4});
    out.push_back({PolicyKind::neighbor_every_n, 2, 4});
    out.push_back({PolicyKind::neighbor_every_n, 3, 4});
    out.push_back({PolicyKind::neighbor_every_n, 4, 4});
    out.push_back({PolicyKind::neighbor_online_random, 2, 4});
    out.push_back({PolicyKind::random_fraction, 2, 4});
    return out;
}

std::vector<PolicySpec> chapter5_policy_set() {
    return {{PolicyKind::dynamic_sampling, 2, 4},
            {PolicyKind::naive, 1, 4},
            {PolicyKind::bouncy, 2, 4}};
}

Scenario chapter4_comparison(char scenario, int repetitions, std::uint64_t seed) {
    Scenario s;
    s.name = std::string("ch4_scenario_") + static_cast<char>(std::tolower(scenario));
    s.base = chapter4_base(scenario);
    s.base.seed = seed;
    s.repetitions = repetitions;
    s.policies = chapter4_policy_set();
    return s;
}

Scenario chapter5_comparison(char scenario, int repetitions, std::uint64_t seed) {
    Scenario s;
    s.name = std::string("ch5_scenario_") + static_cast<char>(std::tolower(scenario));
    s.base = chapter5_base(scenario);
    s.base.seed = seed;
    s.repetitions = repetitions;
    s.policies = chapter5_policy_set();
    return s;
}

}  // namespace pestscout
