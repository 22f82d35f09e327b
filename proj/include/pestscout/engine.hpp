#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pestscout/cost_model.hpp"
#include "pestscout/field.hpp"
#include "pestscout/infestation.hpp"
#include "pestscout/policies.hpp"

namespace pestscout {

enum class Mode { chapter4, chapter5 };

std::string mode_name(Mode mode);
std::optional<Mode> mode_from_name(const std::string& name);

// Clustered stand-in for field-survey data (see seed_clustered).
struct ClusterSeed {
    int clusters = 4;
    int growth_steps = 3;
    double growth_severity = 0.5;
};

struct SimConfig {
    FieldSpec field;
    SpreadParams spread;
    CostModel cost;
    PolicySpec policy;
    int days = 3;
    std::uint64_t seed = 0;
    Mode mode = Mode::chapter4;
    // Initial population, first match wins: explicit mask, map file,
    // clustered seeding, then the random per-row seeding.
    std::optional<std::vector<std::uint8_t>> initial_mask;
    std::optional<std::filesystem::path> map_file;
    std::optional<ClusterSeed> cluster_seed;
    // Robot-free spread steps applied before day 1; the grown population is
    // counted as the initial one.
    int warmup_days = 0;

    void validate() const;
};

struct DayReport {
    int day = 0;  // 1-based
    int visited_count = 0;
    double visited_pct = 0.0;  // PVV_ED
    int detections = 0;
    double detection_pct_of_day_start = 0.0;  // PCD_ED
    double time_used_s = 0.0;
    double cumulative_detection_pct = 0.0;  // against the reference denominator
    int new_bugs_after_day = 0;
};

struct RunReport {
    std::string policy_name;
    std::uint64_t seed = 0;
    int total_plants = 0;
    std::vector<DayReport> days;
    double pvv_all = 0.0;  // percent of plants visited at least once
    double pcd_all = 0.0;  // final cumulative detection percent
    long long md = 0;      // insects never detected (reference accounting)
    std::optional<int> d30, d50, d80, d100;
    long long initial_insects = 0;
    long long denominator = 0;       // excludes the final day's spread
    long long cumulative_total = 0;  // physical total, conservation holds on this
    long long detected_total = 0;
};

struct StepEvent {
    int day = 0;
    const Action* action = nullptr;
    const Policy* policy = nullptr;
    const InfestationState* state = nullptr;
    const FieldGrid* grid = nullptr;
    PlantIndex position_before{};
    double time_left_after = 0.0;
};

// Test instrumentation; `proposed` fires after admission but before the
// action is applied, `applied` after bookkeeping and policy commit.
struct RunHooks {
    std::function<void(const StepEvent&)> proposed;
    std::function<void(const StepEvent&)> applied;
    std::function<void(int day, const InfestationState&)> day_end;
};

RunReport run_simulation(const SimConfig& config, const RunHooks* hooks = nullptr);

// Reference accounting: insects spawned by the final day's spread are not
// part of the detection denominator.
long long detection_denominator(long long initial, const std::vector<int>& new_per_day,
                                bool exclude_final_day = true);

}  // namespace pestscout
