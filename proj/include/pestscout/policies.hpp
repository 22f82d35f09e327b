#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pestscout/cost_model.hpp"
#include "pestscout/field.hpp"

namespace pestscout {

enum class PolicyKind {
    snake_every,             // every vine, right side
    snake_every_n,           // every n plants, right side
    snake_online_random,     // random skip 1..max_skip, right side
    neighbor_every_n,        // every n plants, both sides
    neighbor_online_random,  // random skip, both sides
    neighbor_every,          // every vine, both sides
    random_fraction,         // 1/n of the field, drawn fresh each day
    naive,                   // every plant, serpentine, timed travel
    bouncy,                  // every n-th plant, serpentine, timed travel
    dynamic_sampling,        // open/close-list hot-spot chaser
};

struct PolicySpec {
    PolicyKind kind = PolicyKind::snake_every;
    int n = 2;         // stride (snake_every_n, neighbor_every_n, bouncy, random_fraction)
    int max_skip = 4;  // online random bound

    void validate() const;
    std::string name() const;  // lower_snake id, e.g. "neighbor_every_n"
    // Report label: the id plus the distinguishing parameter, e.g.
    // "neighbor_every_n_3" or "snake_online_random_4".
    std::string display_name() const;
};

std::optional<PolicyKind> policy_kind_from_name(const std::string& name);
std::vector<std::string> policy_names();

struct Action {
    enum class Kind { inspect_single, inspect_pair, end_of_row, day_done };
    Kind kind = Kind::day_done;
    PlantIndex target{};
    PlantIndex partner{};  // inspect_pair only
    double cost_s = 0.0;
    Step::Kind step_kind = Step::Kind::advance_and_inspect;
    int viewpoints = 0;  // 0 for timed (dynamic_move) inspections

    bool is_inspection() const {
        return kind == Kind::inspect_single || kind == Kind::inspect_pair;
    }
};

// What a policy can see of the running day.
struct EngineView {
    const FieldGrid* grid = nullptr;
    const CostModel* cost = nullptr;
    int day = 1;  // 1-based
    double time_left_s = 0.0;
    PlantIndex position{};
    const std::vector<std::uint8_t>* visited_today = nullptr;
    int visited_today_count = 0;
    const std::vector<int>* visit_counts = nullptr;  // across all days
    const std::vector<std::uint8_t>* visited_ever = nullptr;
    std::mt19937_64* rng = nullptr;  // policy stream
};

class Policy {
  public:
    virtual ~Policy() = default;
    virtual void on_day_start(const EngineView& view) = 0;
    // Pure peek: repeated calls without commit return the same action.
    virtual Action next_action(const EngineView& view) = 0;
    virtual void commit(const EngineView& view, const Action& action) = 0;
    virtual void on_detection(const EngineView& view, PlantIndex p) { (void)view; (void)p; }
    // Chapter-4 scripts admit a step while time_left minus a fixed guard
    // expression stays positive; timed policies are guarded by the action
    // cost itself (nullopt).
    virtual std::optional<double> admission_guard(const EngineView& view) const = 0;
    virtual const PolicySpec& spec() const = 0;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const FieldGrid& grid);

// Diagnostics surface for the dynamic policy, used by the pop-is-nearest
// verification.
class DynamicDiagnostics {
  public:
    virtual ~DynamicDiagnostics() = default;
    virtual std::vector<int> open_list() const = 0;
};

const DynamicDiagnostics* dynamic_diagnostics(const Policy& policy);

}  // namespace pestscout
