#include "pestscout/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "pestscout/rng.hpp"

namespace pestscout {

void PolicySpec::validate() const {
    if (n < 1) throw std::invalid_argument("policy parameter n must be >= 1");
    if (max_skip < 1) throw std::invalid_argument("max_skip must be >= 1");
    if (kind == PolicyKind::random_fraction && n < 2) {
        throw std::invalid_argument("random_fraction requires n >= 2");
    }
}

std::string PolicySpec::name() const {
    switch (kind) {
        case PolicyKind::snake_every: return "snake_every";
        case PolicyKind::snake_every_n: return "snake_every_n";
        case PolicyKind::snake_online_random: return "snake_online_random";
        case PolicyKind::neighbor_every_n: return "neighbor_every_n";
        case PolicyKind::neighbor_online_random: return "neighbor_online_random";
        case PolicyKind::neighbor_every: return "neighbor_every";
        case PolicyKind::random_fraction: return "random_fraction";
        case PolicyKind::naive: return "naive";
        case PolicyKind::bouncy: return "bouncy";
        case PolicyKind::dynamic_sampling: return "dynamic";
    }
    return "unknown";
}

std::string PolicySpec::display_name() const {
    switch (kind) {
        case PolicyKind::snake_every_n:
        case PolicyKind::neighbor_every_n:
        case PolicyKind::bouncy:
        case PolicyKind::random_fraction:
            return name() + "_" + std::to_string(n);
        case PolicyKind::snake_online_random:
        case PolicyKind::neighbor_online_random:
            return name() + "_" + std::to_string(max_skip);
        default:
            return name();
    }
}

std::optional<PolicyKind> policy_kind_from_name(const std::string& name) {
    for (PolicyKind k :
         {PolicyKind::snake_every, PolicyKind::snake_every_n, PolicyKind::snake_online_random,
          PolicyKind::neighbor_every_n, PolicyKind::neighbor_online_random,
          PolicyKind::neighbor_every, PolicyKind::random_fraction, PolicyKind::naive,
          PolicyKind::bouncy, PolicyKind::dynamic_sampling}) {
        PolicySpec s;
        s.kind = k;
        if (s.name() == name) return k;
    }
    return std::nullopt;
}

std::vector<std::string> policy_names() {
    return {"snake_every",     "snake_every_n",          "snake_online_random",
            "neighbor_every_n", "neighbor_online_random", "neighbor_every",
            "random_fraction", "naive",                  "bouncy",
            "dynamic"};
}

namespace {

// Reference restart scan: least-visited plant among `window` linear ids,
// keeping the highest-index minimizer (the scan overwrites on ties).
int least_visited_restart(const std::vector<int>& visit_counts, int lo, int hi) {
    int min_count = std::numeric_limits<int>::max();
    for (int i = lo; i <= hi; ++i) min_count = std::min(min_count, visit_counts[i]);
    int target = lo;
    for (int i = lo; i <= hi; ++i) {
        if (visit_counts[i] == min_count) target = i;
    }
    return target;
}

class SnakeFamilyPolicy final : public Policy {
  public:
    SnakeFamilyPolicy(PolicySpec spec, const FieldGrid& grid) : spec_(spec), grid_(&grid) {
        stride_ = (spec.kind == PolicyKind::snake_every) ? 1 : spec.n;
        online_ = spec.kind == PolicyKind::snake_online_random;
    }

    void on_day_start(const EngineView&) override {}

    Action next_action(const EngineView& view) override {
        if (view.visited_today_count >= grid_->total_plants()) return Action{};
        if (pending_row_change_) {
            Action a;
            a.kind = Action::Kind::end_of_row;
            a.step_kind = *pending_row_change_;
            a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m, {a.step_kind});
            return a;
        }
        Action a;
        a.kind = Action::Kind::inspect_single;
        a.target = grid_->from_linear(cursor_);
        a.step_kind = Step::Kind::advance_and_inspect;
        a.viewpoints = 3;
        a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m,
                             {Step::Kind::advance_and_inspect, 3});
        return a;
    }

    void commit(const EngineView& view, const Action& action) override {
        if (action.kind == Action::Kind::end_of_row) {
            pending_row_change_.reset();
            return;
        }
        if (action.kind != Action::Kind::inspect_single) return;
        const int N = grid_->plants_per_row();
        const int total = grid_->total_plants();
        const PlantIndex p = grid_->from_linear(cursor_);
        // End-of-row costs fire when the walk lands exactly on a boundary
        // slot, as in the reference loops (rare for strides > 1).
        if ((forward_ && p.slot == N - 1) || (!forward_ && p.slot == 0)) {
            int next_line = forward_ ? p.line + 1 : p.line - 1;
            if (next_line < 0 || next_line >= grid_->num_plant_lines()) next_line = p.line;
            pending_row_change_ = grid_->corridor_of(p.line) == grid_->corridor_of(next_line)
                                      ? Step::Kind::end_of_row_same
                                      : Step::Kind::end_of_row_next;
        }
        int k = online_ ? uniform_int(*view.rng, 1, spec_.max_skip) : stride_;
        if (forward_) {
            int next = cursor_ + k;
            if (next >= total) {
                int window = std::min(k, N);
                cursor_ = least_visited_restart(*view.visit_counts, total - window, total - 1);
                forward_ = false;
            } else {
                cursor_ = next;
            }
        } else {
            int next = cursor_ - k;
            if (next < 0) {
                int window = std::min(k, N);
                cursor_ = least_visited_restart(*view.visit_counts, 0, window - 1);
                forward_ = true;
            } else {
                cursor_ = next;
            }
        }
    }

    std::optional<double> admission_guard(const EngineView& view) const override {
        const auto& c = *view.cost;
        return grid_->spec().plant_spacing_m / c.speed_m_per_s + c.vp_time(3) + c.turn90_s;
    }

    const PolicySpec& spec() const override { return spec_; }

  private:
    PolicySpec spec_;
    const FieldGrid* grid_;
    int stride_ = 1;
    bool online_ = false;
    int cursor_ = 0;
    bool forward_ = true;
    std::optional<Step::Kind> pending_row_change_;
};

// Both-sides traversal. The field decomposes into stations: the unpaired
// edge line 0, the facing pairs (1,2), (3,4), ..., and the unpaired edge
// line L-1. Pairs are inspected in one stop; edge lines singly.
class NeighborFamilyPolicy final : public Policy {
  public:
    NeighborFamilyPolicy(PolicySpec spec, const FieldGrid& grid) : spec_(spec), grid_(&grid) {
        stride_ = (spec.kind == PolicyKind::neighbor_every) ? 1 : spec.n;
        online_ = spec.kind == PolicyKind::neighbor_online_random;
        const int L = grid.num_plant_lines();
        stations_.push_back({0, std::nullopt});
        for (int line = 1; line + 1 < L; line += 2) stations_.push_back({line, line + 1});
        if (L >= 2) stations_.push_back({L - 1, std::nullopt});
    }

    void on_day_start(const EngineView&) override {}

    Action next_action(const EngineView& view) override {
        if (view.visited_today_count >= grid_->total_plants()) return Action{};
        if (pending_row_change_) {
            Action a;
            a.kind = Action::Kind::end_of_row;
            a.step_kind = Step::Kind::end_of_row_next;
            a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m,
                                 {Step::Kind::end_of_row_next});
            return a;
        }
        const Station& st = stations_[static_cast<std::size_t>(station_)];
        Action a;
        a.target = {st.anchor, slot_};
        a.viewpoints = 1;
        if (st.partner) {
            a.kind = Action::Kind::inspect_pair;
            a.partner = {*st.partner, slot_};
            a.step_kind = Step::Kind::pair_inspect;
            a.cost_s =
                step_cost(*view.cost, grid_->spec().plant_spacing_m, {Step::Kind::pair_inspect, 1});
        } else {
            a.kind = Action::Kind::inspect_single;
            a.step_kind = Step::Kind::advance_and_inspect;
            a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m,
                                 {Step::Kind::advance_and_inspect, 1});
        }
        return a;
    }

    void commit(const EngineView& view, const Action& action) override {
        if (action.kind == Action::Kind::end_of_row) {
            pending_row_change_ = false;
            return;
        }
        if (!action.is_inspection()) return;
        const int N = grid_->plants_per_row();
        int k = online_ ? uniform_int(*view.rng, 1, spec_.max_skip) : stride_;
        if (forward_) {
            int next = slot_ + k;
            if (next < N) {
                slot_ = next;
            } else if (station_ + 1 < static_cast<int>(stations_.size())) {
                ++station_;
                slot_ = next - N;  // the stride carries its residue across rows
                pending_row_change_ = true;
            } else {
                restart_backward(view, k);
            }
        } else {
            int next = slot_ - k;
            if (next >= 0) {
                slot_ = next;
            } else if (station_ > 0) {
                --station_;
                slot_ = next + N;
                pending_row_change_ = true;
            } else {
                restart_forward(view, k);
            }
        }
    }

    std::optional<double> admission_guard(const EngineView& view) const override {
        const auto& c = *view.cost;
        return grid_->spec().plant_spacing_m / c.speed_m_per_s + 2.0 * c.vp_time(1) + c.turn180_s;
    }

    const PolicySpec& spec() const override { return spec_; }

  private:
    struct Station {
        int anchor;
        std::optional<int> partner;
    };

    void restart_backward(const EngineView& view, int k) {
        const int N = grid_->plants_per_row();
        const int last_line = grid_->num_plant_lines() - 1;
        int window = std::min(k, N);
        int base = grid_->to_linear({last_line, 0});
        int target = least_visited_restart(*view.visit_counts, base + N - window, base + N - 1);
        station_ = static_cast<int>(stations_.size()) - 1;
        slot_ = grid_->from_linear(target).slot;
        forward_ = false;
    }

    void restart_forward(const EngineView& view, int k) {
        const int N = grid_->plants_per_row();
        int window = std::min(k, N);
        int target = least_visited_restart(*view.visit_counts, 0, window - 1);
        station_ = 0;
        slot_ = grid_->from_linear(target).slot;
        forward_ = true;
    }

    PolicySpec spec_;
    const FieldGrid* grid_;
    std::vector<Station> stations_;
    int stride_ = 1;
    bool online_ = false;
    int station_ = 0;
    int slot_ = 0;
    bool forward_ = true;
    bool pending_row_change_ = false;
};

// Draws a fresh uniform sample of ceil(total/n) plants each day and visits
// it in draw order.
class RandomFractionPolicy final : public Policy {
  public:
    RandomFractionPolicy(PolicySpec spec, const FieldGrid& grid) : spec_(spec), grid_(&grid) {}

    void on_day_start(const EngineView& view) override {
        const int total = grid_->total_plants();
        const int count = (total + spec_.n - 1) / spec_.n;
        std::vector<int> ids(total);
        for (int i = 0; i < total; ++i) ids[i] = i;
        // Partial Fisher-Yates; hand-rolled so the sequence is reproducible
        // independent of the standard library.
        for (int i = 0; i < count; ++i) {
            int j = uniform_int(*view.rng, i, total - 1);
            std::swap(ids[i], ids[j]);
        }
        ids.resize(count);
        order_ = std::move(ids);
        index_ = 0;
    }

    Action next_action(const EngineView& view) override {
        if (index_ >= order_.size()) return Action{};
        Action a;
        a.kind = Action::Kind::inspect_single;
        a.target = grid_->from_linear(order_[index_]);
        a.step_kind = Step::Kind::advance_and_inspect;
        a.viewpoints = 3;
        a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m,
                             {Step::Kind::advance_and_inspect, 3});
        return a;
    }

    void commit(const EngineView&, const Action& action) override {
        if (action.is_inspection()) ++index_;
    }

    std::optional<double> admission_guard(const EngineView& view) const override {
        const auto& c = *view.cost;
        return grid_->spec().plant_spacing_m / c.speed_m_per_s + c.vp_time(3) + c.turn90_s;
    }

    const PolicySpec& spec() const override { return spec_; }

  private:
    PolicySpec spec_;
    const FieldGrid* grid_;
    std::vector<int> order_;
    std::size_t index_ = 0;
};

// Naive / Bouncy. Serpentine order over the lines (even lines ascending,
// odd descending) so consecutive stops are physically adjacent; travel is
// timed from the robot's actual position.
class SerpentinePolicy final : public Policy {
  public:
    SerpentinePolicy(PolicySpec spec, const FieldGrid& grid) : spec_(spec), grid_(&grid) {
        stride_ = (spec.kind == PolicyKind::naive) ? 1 : spec.n;
    }

    void on_day_start(const EngineView&) override {}

    Action next_action(const EngineView& view) override {
        if (view.visited_today_count >= grid_->total_plants()) return Action{};
        Action a;
        a.kind = Action::Kind::inspect_single;
        a.target = plant_at(cursor_);
        a.step_kind = Step::Kind::dynamic_move;
        double dist = grid_->travel_distance_m(view.position, a.target);
        a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m,
                             {Step::Kind::dynamic_move, 0, dist});
        return a;
    }

    void commit(const EngineView& view, const Action& action) override {
        if (!action.is_inspection()) return;
        const int total = grid_->total_plants();
        if (forward_) {
            int next = cursor_ + stride_;
            if (next >= total) {
                cursor_ = restart(view, total - std::min(stride_, grid_->plants_per_row()),
                                  total - 1);
                forward_ = false;
            } else {
                cursor_ = next;
            }
        } else {
            int next = cursor_ - stride_;
            if (next < 0) {
                cursor_ = restart(view, 0, std::min(stride_, grid_->plants_per_row()) - 1);
                forward_ = true;
            } else {
                cursor_ = next;
            }
        }
    }

    std::optional<double> admission_guard(const EngineView&) const override {
        return std::nullopt;  // timed: guarded by the action cost
    }

    const PolicySpec& spec() const override { return spec_; }

  private:
    PlantIndex plant_at(int t) const {
        const int N = grid_->plants_per_row();
        int line = t / N;
        int r = t % N;
        return {line, line % 2 == 0 ? r : N - 1 - r};
    }

    // Least-visited restart over a window of serpentine positions; ties keep
    // the highest position.
    int restart(const EngineView& view, int lo, int hi) const {
        int min_count = std::numeric_limits<int>::max();
        for (int t = lo; t <= hi; ++t) {
            min_count = std::min(min_count, (*view.visit_counts)[grid_->to_linear(plant_at(t))]);
        }
        int target = lo;
        for (int t = lo; t <= hi; ++t) {
            if ((*view.visit_counts)[grid_->to_linear(plant_at(t))] == min_count) target = t;
        }
        return target;
    }

    PolicySpec spec_;
    const FieldGrid* grid_;
    int stride_ = 1;
    int cursor_ = 0;
    bool forward_ = true;
};

// Open-list hot-spot chaser. Pops the plant nearest by travel time; a
// successful detection pushes the plant's neighbors. When the list runs dry
// it is refilled from, in order: suspicious plants never visited in the run,
// any plant never visited in the run, then any plant not yet visited today
// (plants may be re-sampled on later days).
class DynamicPolicy final : public Policy, public DynamicDiagnostics {
  public:
    DynamicPolicy(PolicySpec spec, const FieldGrid& grid)
        : spec_(spec),
          grid_(&grid),
          suspicious_(boundary_mask(grid)),
          in_open_(grid.total_plants(), 0),
          line_slots_(grid.num_plant_lines()) {}

    void on_day_start(const EngineView&) override {
        // The open list carries over; the close list is the day's visited
        // set, which the engine resets.
    }

    Action next_action(const EngineView& view) override {
        if (open_count_ == 0) refill(view);
        if (open_count_ == 0) return Action{};
        int target = nearest_open(view.position);
        Action a;
        a.kind = Action::Kind::inspect_single;
        a.target = grid_->from_linear(target);
        a.step_kind = Step::Kind::dynamic_move;
        double dist = grid_->travel_distance_m(view.position, a.target);
        a.cost_s = step_cost(*view.cost, grid_->spec().plant_spacing_m,
                             {Step::Kind::dynamic_move, 0, dist});
        return a;
    }

    void commit(const EngineView&, const Action& action) override {
        if (!action.is_inspection()) return;
        erase(grid_->to_linear(action.target));
    }

    void on_detection(const EngineView& view, PlantIndex p) override {
        for (const auto& nb : grid_->adjacency(p)) {
            int id = grid_->to_linear(nb);
            if (!(*view.visited_today)[id]) insert(id);
        }
    }

    std::optional<double> admission_guard(const EngineView&) const override {
        return std::nullopt;
    }

    const PolicySpec& spec() const override { return spec_; }

    std::vector<int> open_list() const override {
        std::vector<int> out;
        out.reserve(open_count_);
        for (int line = 0; line < static_cast<int>(line_slots_.size()); ++line) {
            for (int slot : line_slots_[line]) out.push_back(grid_->to_linear({line, slot}));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    void insert(int id) {
        if (in_open_[id]) return;
        in_open_[id] = 1;
        PlantIndex p = grid_->from_linear(id);
        line_slots_[p.line].insert(p.slot);
        ++open_count_;
    }

    void erase(int id) {
        if (!in_open_[id]) return;
        in_open_[id] = 0;
        PlantIndex p = grid_->from_linear(id);
        line_slots_[p.line].erase(p.slot);
        --open_count_;
    }

    void refill(const EngineView& view) {
        const int total = grid_->total_plants();
        for (int i = 0; i < total; ++i) {
            if (suspicious_[i] && !(*view.visited_ever)[i]) insert(i);
        }
        if (open_count_ > 0) return;
        for (int i = 0; i < total; ++i) {
            if (!(*view.visited_ever)[i]) insert(i);
        }
        if (open_count_ > 0) return;
        for (int i = 0; i < total; ++i) {
            if (!(*view.visited_today)[i]) insert(i);
        }
    }

    int nearest_open(PlantIndex pos) const {
        const int L = grid_->num_plant_lines();
        const int N = grid_->plants_per_row();
        const double sp = grid_->spec().plant_spacing_m;
        const double w = grid_->spec().charge_crossing ? grid_->spec().row_width_m : 0.0;
        double best = std::numeric_limits<double>::infinity();
        int best_id = -1;
        auto consider = [&](int line, int slot) {
            double d = grid_->travel_distance_m(pos, {line, slot});
            int id = grid_->to_linear({line, slot});
            if (d < best || (d == best && id < best_id)) {
                best = d;
                best_id = id;
            }
        };
        auto scan_line = [&](int line) {
            const auto& slots = line_slots_[line];
            if (slots.empty()) return;
            if (grid_->corridor_of(line) == grid_->corridor_of(pos.line)) {
                auto it = slots.lower_bound(pos.slot);
                if (it != slots.end()) consider(line, *it);
                if (it != slots.begin()) consider(line, *std::prev(it));
            } else {
                // Entry is via a row end; the best slot per end is the
                // extreme one.
                consider(line, *slots.begin());
                consider(line, *slots.rbegin());
            }
        };
        // Expand outward from the robot's line. Any line two or more lines
        // away costs at least the run to a row end plus the lateral
        // crossings, which bounds how far the scan must look.
        const double end_leg = std::min(pos.slot, N - 1 - pos.slot) * sp;
        for (int d = 0; d < L; ++d) {
            int lo = pos.line - d, hi = pos.line + d;
            if (lo < 0 && hi >= L) break;
            if (lo >= 0) scan_line(lo);
            if (d > 0 && hi < L) scan_line(hi);
            if (best_id >= 0 && end_leg + (d + 1) * w >= best) break;
        }
        return best_id;
    }

    PolicySpec spec_;
    const FieldGrid* grid_;
    std::vector<std::uint8_t> suspicious_;
    std::vector<std::uint8_t> in_open_;
    std::vector<std::set<int>> line_slots_;
    int open_count_ = 0;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const FieldGrid& grid) {
    spec.validate();
    switch (spec.kind) {
        case PolicyKind::snake_every:
        case PolicyKind::snake_every_n:
        case PolicyKind::snake_online_random:
            return std::make_unique<SnakeFamilyPolicy>(spec, grid);
        case PolicyKind::neighbor_every_n:
        case PolicyKind::neighbor_online_random:
        case PolicyKind::neighbor_every:
            return std::make_unique<NeighborFamilyPolicy>(spec, grid);
        case PolicyKind::random_fraction:
            return std::make_unique<RandomFractionPolicy>(spec, grid);
        case PolicyKind::naive:
        case PolicyKind::bouncy:
            return std::make_unique<SerpentinePolicy>(spec, grid);
        case PolicyKind::dynamic_sampling:
            return std::make_unique<DynamicPolicy>(spec, grid);
    }
    throw std::invalid_argument("unknown policy kind");
}

const DynamicDiagnostics* dynamic_diagnostics(const Policy& policy) {
    return dynamic_cast<const DynamicDiagnostics*>(&policy);
}

}  // namespace pestscout
