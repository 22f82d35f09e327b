#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "pestscout/config.hpp"
#include "pestscout/csv.hpp"
#include "pestscout/experiments.hpp"
#include "pestscout/rng.hpp"

namespace fs = std::filesystem;
using namespace pestscout;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string policy_list;
    std::string mode;
    long long seed = -1;
    int reps = 0;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (defaults apply when omitted)");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--seed", opts.seed, "Master seed override");
    cmd->add_option("--reps", opts.reps, "Repetitions override");
    cmd->add_option("--policy", opts.policy_list,
                    "Policy override, comma separated (e.g. dynamic,naive,bouncy:2)");
    cmd->add_option("--jobs", opts.jobs, "Parallel repetition workers");
    cmd->add_option("--mode", opts.mode, "chapter4 or chapter5 (when no config given)");
}

// Tracks written files so a failed command leaves no partial output behind.
class OutputDir {
  public:
    explicit OutputDir(const fs::path& dir) : dir_(dir) { fs::create_directories(dir); }

    void write(const std::string& name, const std::string& content) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / (name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + tmp.string());
            out << content;
        }
        fs::rename(tmp, target);
        written_.push_back(target);
    }

    void discard_all() {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
    }

    const fs::path& dir() const { return dir_; }

  private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

ParsedConfig load_config(const CommonOpts& opts) {
    if (!opts.config_path.empty()) return parse_config(opts.config_path);
    std::string text;
    if (!opts.mode.empty()) text = "[run]\nmode = " + opts.mode + "\n";
    return parse_config_text(text, "<defaults>");
}

Scenario to_scenario(ParsedConfig parsed) {
    if (auto* scenario = std::get_if<Scenario>(&parsed)) return std::move(*scenario);
    if (auto* config = std::get_if<SimConfig>(&parsed)) {
        Scenario s;
        s.name = "run";
        s.base = *config;
        s.repetitions = 1;
        s.policies = {config->policy};
        return s;
    }
    throw ConfigError("this config describes a sweep; use the sweep command");
}

void apply_overrides(Scenario& scenario, const CommonOpts& opts) {
    if (opts.seed >= 0) scenario.base.seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.reps > 0) scenario.repetitions = opts.reps;
    if (!opts.policy_list.empty()) {
        scenario.policies.clear();
        std::stringstream ss(opts.policy_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) scenario.policies.push_back(parse_policy_entry(item));
        }
        if (scenario.policies.empty()) throw ConfigError("--policy produced an empty list");
        scenario.base.policy = scenario.policies.front();
    }
}

void write_scenario_outputs(OutputDir& out, const Scenario& scenario,
                            const AggregateReport& report) {
    out.write("results.csv", results_csv(report));
    out.write("summary.csv", summary_csv(report));
    out.write("thresholds.csv", thresholds_csv(report));
    if (scenario.repetitions == 1 && scenario.policies.size() == 1) {
        out.write("effective_config.cfg", emit_config(scenario.base));
    } else {
        out.write("effective_config.cfg", emit_config(scenario));
    }
}

void write_initial_map(OutputDir& out, const Scenario& scenario) {
    // The day-0 infestation of repetition 0, re-ingestible via map_file.
    SimConfig config = scenario.base;
    config.policy = scenario.policies.front();
    config.seed = repetition_seed(scenario.base.seed, 0);
    const FieldGrid grid = build_grid(config.field);
    auto rng = make_stream(config.seed, RngStream::seeding);
    InfestationState state;
    if (config.initial_mask) {
        state = seed_from_mask(grid, *config.initial_mask);
    } else if (config.map_file) {
        state = seed_from_map(grid, *config.map_file);
    } else if (config.cluster_seed) {
        state = seed_clustered(grid, config.cluster_seed->clusters,
                               config.cluster_seed->growth_steps,
                               config.cluster_seed->growth_severity, rng);
    } else {
        state = seed_random(grid, config.spread, rng);
    }
    for (int i = 0; i < config.warmup_days; ++i) {
        spread_end_of_day(state, grid, config.spread.severity, config.spread.per_edge, rng);
    }
    out.write("initial_map.txt", map_text(state, grid));
}

int cmd_run_or_compare(const CommonOpts& opts, bool is_compare) {
    Scenario scenario = to_scenario(load_config(opts));
    apply_overrides(scenario, opts);
    if (!is_compare && scenario.policies.size() > 1) {
        throw ConfigError("run expects a single policy; use compare for policy sets");
    }
    const AggregateReport report = run_scenario(scenario, opts.jobs);
    OutputDir out(opts.out_dir);
    try {
        write_scenario_outputs(out, scenario, report);
        write_initial_map(out, scenario);
    } catch (...) {
        out.discard_all();
        throw;
    }
    std::cout << text_summary(report);
    std::cout << "wrote " << out.dir().string() << "/{results,summary,thresholds}.csv\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    ParsedConfig parsed = load_config(opts);
    auto* sweep_ptr = std::get_if<SweepSpec>(&parsed);
    if (!sweep_ptr) throw ConfigError("sweep requires a config with a [sweep] section");
    SweepSpec sweep = std::move(*sweep_ptr);
    apply_overrides(sweep.base, opts);
    const auto reports = run_sweep(sweep, opts.jobs);
    OutputDir out(opts.out_dir);
    try {
        out.write("sweep_summary.csv",
                  sweep_summary_csv(sweep_axis_name(sweep.axis), sweep.values, reports));
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const std::string suffix = "_v" + std::to_string(i);
            out.write("results" + suffix + ".csv", results_csv(reports[i]));
            out.write("thresholds" + suffix + ".csv", thresholds_csv(reports[i]));
        }
        out.write("effective_config.cfg", emit_config(sweep));
    } catch (...) {
        out.discard_all();
        throw;
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::cout << sweep_axis_name(sweep.axis) << " = " << format_number(sweep.values[i])
                  << "\n"
                  << text_summary(reports[i]) << "\n";
    }
    std::cout << "wrote " << out.dir().string() << "/sweep_summary.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pestscout: row-crop pest scouting policy simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts, compare_opts;
    auto* run_cmd = app.add_subcommand("run", "Run one policy, one or more repetitions");
    add_common(run_cmd, run_opts);
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    add_common(sweep_cmd, sweep_opts);
    auto* compare_cmd = app.add_subcommand("compare", "Compare policies on paired seeds");
    add_common(compare_cmd, compare_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run_or_compare(run_opts, false);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        if (compare_cmd->parsed()) return cmd_run_or_compare(compare_opts, true);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
