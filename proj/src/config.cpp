#include "pestscout/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pestscout/csv.hpp"

namespace pestscout {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using KeyMap = std::map<std::string, Entry>;  // "section.key" -> entry

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

KeyMap tokenize(const std::string& text, const std::string& origin) {
    static const std::vector<std::string> kSections = {"run",    "field", "spread",
                                                       "cost",   "policy", "sweep"};
    KeyMap map;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
                fail(origin, line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        if (section.empty()) fail(origin, line_no, "key outside of any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        std::string full = section + "." + key;
        if (map.count(full)) fail(origin, line_no, "duplicate key " + full);
        map[full] = Entry{value, line_no};
    }
    return map;
}

class Reader {
  public:
    Reader(KeyMap map, std::string origin) : map_(std::move(map)), origin_(std::move(origin)) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::string raw(const std::string& key) const {
        auto it = map_.find(key);
        it->second.used = true;
        return it->second.value;
    }

    int line(const std::string& key) const { return map_.at(key).line; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? raw(key) : fallback;
    }

    double get_double(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const std::string v = raw(key);
        try {
            std::size_t pos = 0;
            double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            fail(origin_, line(key), "malformed number for " + key + ": '" + v + "'");
        }
    }

    long long get_int(const std::string& key, long long fallback) const {
        if (!has(key)) return fallback;
        const std::string v = raw(key);
        try {
            std::size_t pos = 0;
            long long out = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            fail(origin_, line(key), "malformed integer for " + key + ": '" + v + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = raw(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(origin_, line(key), "malformed boolean for " + key + ": '" + v + "'");
    }

    void reject_unused() const {
        for (const auto& [key, entry] : map_) {
            if (!entry.used) fail(origin_, entry.line, "unknown key " + key);
        }
    }

    const std::string& origin() const { return origin_; }

  private:
    KeyMap map_;
    std::string origin_;
};

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

DetectionCurve parse_curve(const Reader& r, const std::string& key, const DetectionCurve& fallback) {
    if (!r.has(key)) return fallback;
    const std::string v = r.raw(key);
    if (v == "reference") return DetectionCurve::reference();
    if (v.rfind("flat:", 0) == 0) {
        try {
            return DetectionCurve::flat(std::stod(v.substr(5)));
        } catch (const std::exception&) {
            fail(r.origin(), r.line(key), "malformed flat curve: '" + v + "'");
        }
    }
    DetectionCurve curve;
    for (const auto& step : split_list(v)) {
        auto colon = step.find(':');
        if (colon == std::string::npos) {
            fail(r.origin(), r.line(key), "curve steps must be seconds:probability");
        }
        try {
            curve.steps.emplace_back(std::stod(step.substr(0, colon)),
                                     std::stod(step.substr(colon + 1)));
        } catch (const std::exception&) {
            fail(r.origin(), r.line(key), "malformed curve step: '" + step + "'");
        }
    }
    if (!curve.valid()) {
        fail(r.origin(), r.line(key),
             "curve must start at 0 s and be non-decreasing within [0,1]");
    }
    return curve;
}

SimConfig defaults_for(Mode mode) {
    SimConfig c;
    c.mode = mode;
    if (mode == Mode::chapter4) {
        c.field = FieldSpec{100.0, 3.5, 2.0, 2.0, std::nullopt, true};
        c.cost = CostModel::chapter4_defaults();
        c.spread = SpreadParams{0.3, 0.3, false};
        c.days = 3;
        c.policy = PolicySpec{PolicyKind::snake_every, 1, 4};
    } else {
        c.field = FieldSpec{100.0, 4.0, 3.0, 10.0, std::nullopt, true};
        c.cost = CostModel::chapter5_defaults();
        c.spread = SpreadParams{0.3, 0.3, false};
        c.days = 25;
        c.policy = PolicySpec{PolicyKind::dynamic_sampling, 2, 4};
    }
    c.seed = 42;
    return c;
}

}  // namespace

PolicySpec parse_policy_entry(const std::string& entry) {
    std::string name = entry;
    std::optional<int> param;
    auto colon = entry.find(':');
    if (colon != std::string::npos) {
        name = trim(entry.substr(0, colon));
        try {
            param = std::stoi(entry.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("malformed policy parameter in '" + entry + "'");
        }
    }
    auto kind = policy_kind_from_name(name);
    if (!kind) throw ConfigError("unknown policy '" + name + "'");
    PolicySpec spec;
    spec.kind = *kind;
    if (param) {
        if (*kind == PolicyKind::snake_online_random || *kind == PolicyKind::neighbor_online_random) {
            spec.max_skip = *param;
        } else {
            spec.n = *param;
        }
    }
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string(e.what()) + " in '" + entry + "'");
    }
    return spec;
}

ParsedConfig parse_config_text(const std::string& text, const std::string& origin) {
    Reader r(tokenize(text, origin), origin);

    const std::string mode_str = r.get_string("run.mode", "chapter4");
    auto mode = mode_from_name(mode_str);
    if (!mode) {
        fail(origin, r.has("run.mode") ? r.line("run.mode") : 0,
             "mode must be chapter4 or chapter5, got '" + mode_str + "'");
    }
    SimConfig c = defaults_for(*mode);

    c.days = static_cast<int>(r.get_int("run.days", c.days));
    c.seed = static_cast<std::uint64_t>(r.get_int("run.seed", static_cast<long long>(c.seed)));
    std::string map_file = r.get_string("run.map_file", "");
    if (!map_file.empty()) c.map_file = map_file;

    c.field.row_length_m = r.get_double("field.row_length_m", c.field.row_length_m);
    c.field.row_width_m = r.get_double("field.row_width_m", c.field.row_width_m);
    c.field.plant_spacing_m = r.get_double("field.plant_spacing_m", c.field.plant_spacing_m);
    c.field.area_dunam = r.get_double("field.area_dunam", c.field.area_dunam);
    if (r.has("field.plant_count")) {
        c.field.plant_count = static_cast<int>(r.get_int("field.plant_count", 0));
    }
    c.field.charge_crossing = r.get_bool("field.charge_crossing", c.field.charge_crossing);

    c.spread.initial_probability =
        r.get_double("spread.initial_probability", c.spread.initial_probability);
    c.spread.severity = r.get_double("spread.severity", c.spread.severity);
    c.spread.per_edge = r.get_bool("spread.per_edge", c.spread.per_edge);
    c.warmup_days = static_cast<int>(r.get_int("spread.warmup_days", c.warmup_days));
    const int clusters = static_cast<int>(r.get_int("spread.clusters", 0));
    if (clusters > 0) {
        ClusterSeed cs;
        cs.clusters = clusters;
        cs.growth_steps = static_cast<int>(r.get_int("spread.cluster_growth_steps", cs.growth_steps));
        cs.growth_severity =
            r.get_double("spread.cluster_growth_severity", cs.growth_severity);
        c.cluster_seed = cs;
    } else {
        // Consume the growth keys if present so they are not reported as
        // unknown; they are meaningless without clusters.
        r.get_int("spread.cluster_growth_steps", 0);
        r.get_double("spread.cluster_growth_severity", 0.0);
    }

    c.cost.speed_m_per_s = r.get_double("cost.speed_kmh", 2.5) * 1000.0 / 3600.0;
    c.cost.vp_times_s[0] = r.get_double("cost.vp1_s", c.cost.vp_times_s[0]);
    c.cost.vp_times_s[1] = r.get_double("cost.vp2_s", c.cost.vp_times_s[1]);
    c.cost.vp_times_s[2] = r.get_double("cost.vp3_s", c.cost.vp_times_s[2]);
    c.cost.turn90_s = r.get_double("cost.turn90_s", c.cost.turn90_s);
    c.cost.turn180_s = r.get_double("cost.turn180_s", c.cost.turn180_s);
    c.cost.between_rows_s = r.get_double("cost.between_rows_s", c.cost.between_rows_s);
    c.cost.day_budget_s = r.get_double("cost.day_budget_s", c.cost.day_budget_s);
    c.cost.inspect_seconds = r.get_double("cost.inspect_seconds", c.cost.inspect_seconds);
    c.cost.deduct_turn90 = r.get_bool("cost.deduct_turn90", c.cost.deduct_turn90);
    const std::string detection = r.get_string(
        "cost.detection",
        c.cost.detection_mode == DetectionMode::deterministic ? "deterministic" : "probabilistic");
    if (detection == "deterministic") c.cost.detection_mode = DetectionMode::deterministic;
    else if (detection == "probabilistic") c.cost.detection_mode = DetectionMode::probabilistic;
    else fail(origin, r.line("cost.detection"), "detection must be deterministic or probabilistic");
    c.cost.curve = parse_curve(r, "cost.curve", c.cost.curve);

    std::vector<PolicySpec> policies;
    if (r.has("run.policies")) {
        for (const auto& entry : split_list(r.raw("run.policies"))) {
            try {
                policies.push_back(parse_policy_entry(entry));
            } catch (const ConfigError& e) {
                fail(origin, r.line("run.policies"), e.what());
            }
        }
        if (policies.empty()) fail(origin, r.line("run.policies"), "empty policy list");
    } else {
        PolicySpec spec = c.policy;
        const std::string name = r.get_string("policy.policy", spec.name());
        auto kind = policy_kind_from_name(name);
        if (!kind) fail(origin, r.line("policy.policy"), "unknown policy '" + name + "'");
        spec.kind = *kind;
        spec.n = static_cast<int>(r.get_int("policy.n", spec.n));
        spec.max_skip = static_cast<int>(r.get_int("policy.max_skip", spec.max_skip));
        try {
            spec.validate();
        } catch (const std::exception& e) {
            fail(origin, 0, e.what());
        }
        policies.push_back(spec);
    }
    c.policy = policies.front();

    const int repetitions = static_cast<int>(r.get_int("run.repetitions", 1));
    if (repetitions < 1) fail(origin, r.line("run.repetitions"), "repetitions must be >= 1");

    std::optional<SweepAxis> axis;
    std::vector<double> values;
    if (r.has("sweep.axis")) {
        const std::string axis_str = r.raw("sweep.axis");
        axis = sweep_axis_from_name(axis_str);
        if (!axis) fail(origin, r.line("sweep.axis"), "unknown sweep axis '" + axis_str + "'");
        if (!r.has("sweep.values")) fail(origin, r.line("sweep.axis"), "sweep needs values");
        for (const auto& item : split_list(r.raw("sweep.values"))) {
            try {
                values.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(origin, r.line("sweep.values"), "malformed sweep value '" + item + "'");
            }
        }
        if (values.empty()) fail(origin, r.line("sweep.values"), "sweep needs values");
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i] <= values[i - 1]) {
                fail(origin, r.line("sweep.values"), "sweep values must be strictly increasing");
            }
        }
    } else if (r.has("sweep.values")) {
        fail(origin, r.line("sweep.values"), "sweep values without an axis");
    }

    const std::string scenario_name = r.get_string("run.name", "");
    r.reject_unused();

    try {
        c.validate();
        for (const auto& p : policies) p.validate();
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    if (axis) {
        SweepSpec sweep;
        sweep.axis = *axis;
        sweep.values = values;
        sweep.base.name = scenario_name.empty() ? "sweep" : scenario_name;
        sweep.base.base = c;
        sweep.base.repetitions = repetitions;
        sweep.base.policies = policies;
        return sweep;
    }
    if (policies.size() > 1 || repetitions > 1) {
        Scenario scenario;
        scenario.name = scenario_name.empty() ? "scenario" : scenario_name;
        scenario.base = c;
        scenario.repetitions = repetitions;
        scenario.policies = policies;
        return scenario;
    }
    return c;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

namespace {

std::string curve_to_string(const DetectionCurve& curve) {
    std::string out;
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
        if (i) out += ',';
        out += format_number(curve.steps[i].first) + ':' + format_number(curve.steps[i].second);
    }
    return out;
}

void emit_base(std::ostringstream& out, const SimConfig& c, const std::string& name,
               int repetitions, const std::vector<PolicySpec>& policies) {
    out << "[run]\n";
    if (!name.empty()) out << "name = " << name << "\n";
    out << "mode = " << mode_name(c.mode) << "\n";
    out << "days = " << c.days << "\n";
    out << "seed = " << c.seed << "\n";
    out << "repetitions = " << repetitions << "\n";
    if (policies.size() > 1) {
        out << "policies = ";
        for (std::size_t i = 0; i < policies.size(); ++i) {
            if (i) out << ",";
            out << policies[i].name();
            if (policies[i].kind == PolicyKind::snake_online_random ||
                policies[i].kind == PolicyKind::neighbor_online_random) {
                out << ":" << policies[i].max_skip;
            } else if (policies[i].kind != PolicyKind::snake_every &&
                       policies[i].kind != PolicyKind::neighbor_every &&
                       policies[i].kind != PolicyKind::naive &&
                       policies[i].kind != PolicyKind::dynamic_sampling) {
                out << ":" << policies[i].n;
            }
        }
        out << "\n";
    }
    if (c.map_file) out << "map_file = " << c.map_file->string() << "\n";
    out << "\n[field]\n";
    out << "row_length_m = " << format_number(c.field.row_length_m) << "\n";
    out << "row_width_m = " << format_number(c.field.row_width_m) << "\n";
    out << "plant_spacing_m = " << format_number(c.field.plant_spacing_m) << "\n";
    out << "area_dunam = " << format_number(c.field.area_dunam) << "\n";
    if (c.field.plant_count) out << "plant_count = " << *c.field.plant_count << "\n";
    out << "charge_crossing = " << (c.field.charge_crossing ? "true" : "false") << "\n";
    out << "\n[spread]\n";
    out << "initial_probability = " << format_number(c.spread.initial_probability) << "\n";
    out << "severity = " << format_number(c.spread.severity) << "\n";
    out << "per_edge = " << (c.spread.per_edge ? "true" : "false") << "\n";
    out << "warmup_days = " << c.warmup_days << "\n";
    if (c.cluster_seed) {
        out << "clusters = " << c.cluster_seed->clusters << "\n";
        out << "cluster_growth_steps = " << c.cluster_seed->growth_steps << "\n";
        out << "cluster_growth_severity = " << format_number(c.cluster_seed->growth_severity)
            << "\n";
    }
    out << "\n[cost]\n";
    out << "speed_kmh = " << format_number(c.cost.speed_m_per_s * 3.6) << "\n";
    out << "vp1_s = " << format_number(c.cost.vp_times_s[0]) << "\n";
    out << "vp2_s = " << format_number(c.cost.vp_times_s[1]) << "\n";
    out << "vp3_s = " << format_number(c.cost.vp_times_s[2]) << "\n";
    out << "turn90_s = " << format_number(c.cost.turn90_s) << "\n";
    out << "turn180_s = " << format_number(c.cost.turn180_s) << "\n";
    out << "between_rows_s = " << format_number(c.cost.between_rows_s) << "\n";
    out << "day_budget_s = " << format_number(c.cost.day_budget_s) << "\n";
    out << "inspect_seconds = " << format_number(c.cost.inspect_seconds) << "\n";
    out << "detection = "
        << (c.cost.detection_mode == DetectionMode::deterministic ? "deterministic"
                                                                  : "probabilistic")
        << "\n";
    out << "curve = " << curve_to_string(c.cost.curve) << "\n";
    out << "deduct_turn90 = " << (c.cost.deduct_turn90 ? "true" : "false") << "\n";
    if (policies.size() == 1) {
        out << "\n[policy]\n";
        out << "policy = " << policies[0].name() << "\n";
        out << "n = " << policies[0].n << "\n";
        out << "max_skip = " << policies[0].max_skip << "\n";
    }
}

}  // namespace

std::string emit_config(const SimConfig& config) {
    std::ostringstream out;
    emit_base(out, config, "", 1, {config.policy});
    return out.str();
}

std::string emit_config(const Scenario& scenario) {
    std::ostringstream out;
    emit_base(out, scenario.base, scenario.name, scenario.repetitions, scenario.policies);
    return out.str();
}

std::string emit_config(const SweepSpec& sweep) {
    std::ostringstream out;
    emit_base(out, sweep.base.base, sweep.base.name, sweep.base.repetitions,
              sweep.base.policies);
    out << "\n[sweep]\n";
    out << "axis = " << sweep_axis_name(sweep.axis) << "\n";
    out << "values = ";
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        if (i) out << ",";
        out << format_number(sweep.values[i]);
    }
    out << "\n";
    return out.str();
}

}  // namespace pestscout
