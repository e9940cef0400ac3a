#pragma once

#include <string>
#include <vector>

#include "perpilot/dataset.hpp"
#include "perpilot/orchestrator.hpp"

namespace perpilot {

struct SuccessSlice {
  int successes = 0;
  int total = 0;
  double rate() const { return total == 0 ? 0.0 : double(successes) / total; }
  std::string ratio() const;  // "k/n"
};

struct MetricsReport {
  SuccessSlice overall;
  SuccessSlice simple;
  SuccessSlice normal;
  SuccessSlice hard;

  // Personalized records (non-empty gold elements) only.
  SuccessSlice ep;            // perceived element set == gold set
  SuccessSlice ex_without_hi; // all gold elements resolved by Memory/Exploration
  SuccessSlice ex_with_hi;    // ... or Human
  int hi_count = 0;           // total human-supplied values
};

bool operator==(const MetricsReport& a, const MetricsReport& b);

// Traces and corpus align by instruction id (every trace id must exist in the
// corpus; mismatches throw ValidationError). Pure function of its inputs.
MetricsReport compute_metrics(const std::vector<RunTrace>& traces,
                              const std::vector<Instruction>& corpus);

enum class ReportFormat { PlainTable, Json };

std::string render_report(const MetricsReport& report, ReportFormat format);

// Inverse of render_report(-, Json).
MetricsReport parse_report(const std::string& json_text);

}  // namespace perpilot
