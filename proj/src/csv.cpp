#include "pestscout/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace pestscout {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string results_csv(const AggregateReport& report) {
    std::string out = "run_id,policy,seed,day,visited_pct,pcd_ed,cum_detection_pct,time_used_s\n";
    int run_id = 0;
    for (const auto& policy : report.policies) {
        for (const auto& run : policy.runs) {
            for (const auto& day : run.days) {
                out += std::to_string(run_id);
                out += ',';
                out += run.policy_name;
                out += ',';
                out += std::to_string(run.seed);
                out += ',';
                out += std::to_string(day.day);
                out += ',';
                out += format_number(day.visited_pct);
                out += ',';
                out += format_number(day.detection_pct_of_day_start);
                out += ',';
                out += format_number(day.cumulative_detection_pct);
                out += ',';
                out += format_number(day.time_used_s);
                out += '\n';
            }
            ++run_id;
        }
    }
    return out;
}

std::string summary_csv(const AggregateReport& report) {
    std::string out = "policy,metric,mean,std,median\n";
    auto row = [&](const std::string& policy, const std::string& metric, const StatSummary& s) {
        out += policy + ',' + metric + ',' + format_number(s.mean) + ',' +
               format_number(s.stddev) + ',' + format_number(s.median) + '\n';
    };
    for (const auto& p : report.policies) {
        row(p.policy, "pvv_all", p.pvv_all);
        row(p.policy, "pcd_all", p.pcd_all);
        row(p.policy, "md", p.md);
    }
    return out;
}

std::string thresholds_csv(const AggregateReport& report) {
    std::string out = "policy,seed,d30,d50,d80,d100\n";
    auto cell = [](const std::optional<int>& d) {
        return d ? std::to_string(*d) : std::string();
    };
    for (const auto& p : report.policies) {
        for (const auto& run : p.runs) {
            out += run.policy_name + ',' + std::to_string(run.seed) + ',' + cell(run.d30) + ',' +
                   cell(run.d50) + ',' + cell(run.d80) + ',' + cell(run.d100) + '\n';
        }
    }
    return out;
}

std::string sweep_summary_csv(const std::string& axis, const std::vector<double>& values,
                              const std::vector<AggregateReport>& reports) {
    std::string out = "axis,value,policy,metric,mean,std,median\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const std::string prefix = axis + ',' + format_number(values[i]) + ',';
        auto row = [&](const std::string& policy, const std::string& metric,
                       const StatSummary& s) {
            out += prefix + policy + ',' + metric + ',' + format_number(s.mean) + ',' +
                   format_number(s.stddev) + ',' + format_number(s.median) + '\n';
        };
        for (const auto& p : reports[i].policies) {
            row(p.policy, "pvv_all", p.pvv_all);
            row(p.policy, "pcd_all", p.pcd_all);
            row(p.policy, "md", p.md);
        }
    }
    return out;
}

std::string text_summary(const AggregateReport& report) {
    std::ostringstream out;
    out << "scenario: " << report.scenario_name << '\n';
    out << "policy                     pcd_all(mean/med)  pvv_all(mean)  md(mean)  d100(med)\n";
    for (const auto& p : report.policies) {
        char line[160];
        std::string d100 = std::isfinite(p.d100.median_day)
                               ? std::to_string(static_cast<int>(p.d100.median_day))
                               : std::string("-");
        std::snprintf(line, sizeof(line), "%-26s %7.1f / %-7.1f %10.1f %11.1f %8s\n",
                      p.policy.c_str(), p.pcd_all.mean, p.pcd_all.median, p.pvv_all.mean,
                      p.md.mean, d100.c_str());
        out << line;
    }
    return out.str();
}

}  // namespace pestscout
