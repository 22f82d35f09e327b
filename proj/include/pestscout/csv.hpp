#pragma once

#include <string>

#include "pestscout/experiments.hpp"

namespace pestscout {

// Locale-independent number formatting (always '.' decimal point, shortest
// round-trip form).
std::string format_number(double v);

// One row per (run, day):
// run_id,policy,seed,day,visited_pct,pcd_ed,cum_detection_pct,time_used_s
std::string results_csv(const AggregateReport& report);

// policy,metric,mean,std,median  for pvv_all, pcd_all and md.
std::string summary_csv(const AggregateReport& report);

// policy,seed,d30,d50,d80,d100 with empty cells for unattained thresholds.
std::string thresholds_csv(const AggregateReport& report);

// axis,value,policy,metric,mean,std,median across a sweep.
std::string sweep_summary_csv(const std::string& axis,
                              const std::vector<double>& values,
                              const std::vector<AggregateReport>& reports);

// Human-readable comparison table for stdout.
std::string text_summary(const AggregateReport& report);

}  // namespace pestscout
