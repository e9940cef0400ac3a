#include "perpilot/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

using nlohmann::ordered_json;

std::string SuccessSlice::ratio() const {
  return std::to_string(successes) + "/" + std::to_string(total);
}

bool operator==(const MetricsReport& a, const MetricsReport& b) {
  const auto tie = [](const MetricsReport& m) {
    return std::tuple(m.overall.successes, m.overall.total, m.simple.successes,
                      m.simple.total, m.normal.successes, m.normal.total,
                      m.hard.successes, m.hard.total, m.ep.successes, m.ep.total,
                      m.ex_without_hi.successes, m.ex_without_hi.total,
                      m.ex_with_hi.successes, m.ex_with_hi.total, m.hi_count);
  };
  return tie(a) == tie(b);
}

MetricsReport compute_metrics(const std::vector<RunTrace>& traces,
                              const std::vector<Instruction>& corpus) {
  std::map<int, const Instruction*> by_id;
  for (const auto& r : corpus) by_id[r.id] = &r;

  MetricsReport report;
  for (const auto& trace : traces) {
    const auto it = by_id.find(trace.instruction_id);
    if (it == by_id.end()) {
      throw ValidationError("trace id " + std::to_string(trace.instruction_id) +
                            " has no corpus record");
    }
    const Instruction& record = *it->second;

    report.overall.total += 1;
    report.overall.successes += trace.success ? 1 : 0;
    SuccessSlice& slice = record.difficulty == Difficulty::Simple ? report.simple
                          : record.difficulty == Difficulty::Normal ? report.normal
                                                                    : report.hard;
    slice.total += 1;
    slice.successes += trace.success ? 1 : 0;

    report.hi_count += int(trace.interventions.size());

    if (!record.personalized()) continue;

    // EP: perceived element set == gold set, order- and case-insensitive.
    std::set<std::string> gold;
    for (const auto& g : record.gold_elements) gold.insert(text::normalize(g));
    std::set<std::string> perceived;
    for (const auto& e : trace.perceived_elements) perceived.insert(text::normalize(e));
    report.ep.total += 1;
    report.ep.successes += (trace.perceived_personalized && perceived == gold) ? 1 : 0;

    // Ex: every gold element resolved without (resp. with) human help.
    bool all_without = true;
    bool all_with = true;
    for (const auto& g : gold) {
      const auto source = trace.sources.find(g);
      const ResolutionSource s =
          source == trace.sources.end() ? ResolutionSource::Unresolved : source->second;
      if (s != ResolutionSource::Memory && s != ResolutionSource::Exploration) {
        all_without = false;
        if (s != ResolutionSource::Human) all_with = false;
      }
    }
    report.ex_without_hi.total += 1;
    report.ex_without_hi.successes += all_without ? 1 : 0;
    report.ex_with_hi.total += 1;
    report.ex_with_hi.successes += all_with ? 1 : 0;
  }
  return report;
}

namespace {

std::string percent(double fraction) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << fraction * 100.0 << "%";
  return os.str();
}

std::string cell(const SuccessSlice& s) {
  return percent(s.rate()) + " (" + s.ratio() + ")";
}

ordered_json slice_json(const SuccessSlice& s) {
  return ordered_json{{"successes", s.successes}, {"total", s.total}, {"rate", s.rate()}};
}

SuccessSlice slice_from_json(const ordered_json& j) {
  SuccessSlice s;
  s.successes = j.at("successes").get<int>();
  s.total = j.at("total").get<int>();
  return s;
}

}  // namespace

std::string render_report(const MetricsReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) {
    ordered_json j;
    j["success_rate"] = ordered_json{{"simple", slice_json(report.simple)},
                                     {"normal", slice_json(report.normal)},
                                     {"hard", slice_json(report.hard)},
                                     {"overall", slice_json(report.overall)}};
    j["ep_accuracy"] = slice_json(report.ep);
    j["ex_accuracy_without_hi"] = slice_json(report.ex_without_hi);
    j["ex_accuracy_with_hi"] = slice_json(report.ex_with_hi);
    j["hi_count"] = report.hi_count;
    return j.dump(2) + "\n";
  }

  std::ostringstream os;
  const int w = 16;
  os << std::left << std::setw(24) << "Metric" << std::setw(w) << "Simple"
     << std::setw(w) << "Normal" << std::setw(w) << "Hard" << std::setw(w)
     << "Overall" << "\n";
  os << std::string(24 + 4 * w, '-') << "\n";
  os << std::left << std::setw(24) << "SuccessRate" << std::setw(w)
     << cell(report.simple) << std::setw(w) << cell(report.normal) << std::setw(w)
     << cell(report.hard) << std::setw(w) << cell(report.overall) << "\n";
  os << std::left << std::setw(24) << "EP Acc." << std::setw(w) << "-"
     << std::setw(w) << "-" << std::setw(w) << "-" << std::setw(w)
     << cell(report.ep) << "\n";
  os << std::left << std::setw(24) << "Ex Acc. (w/o HI)" << std::setw(w) << "-"
     << std::setw(w) << "-" << std::setw(w) << "-" << std::setw(w)
     << cell(report.ex_without_hi) << "\n";
  os << std::left << std::setw(24) << "Ex Acc. (with HI)" << std::setw(w) << "-"
     << std::setw(w) << "-" << std::setw(w) << "-" << std::setw(w)
     << cell(report.ex_with_hi) << "\n";
  os << std::left << std::setw(24) << "HI Count" << std::setw(w) << "-"
     << std::setw(w) << "-" << std::setw(w) << "-" << std::setw(w)
     << report.hi_count << "\n";
  return os.str();
}

MetricsReport parse_report(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("metrics report: ") + e.what());
  }
  MetricsReport report;
  try {
    const auto& sr = j.at("success_rate");
    report.simple = slice_from_json(sr.at("simple"));
    report.normal = slice_from_json(sr.at("normal"));
    report.hard = slice_from_json(sr.at("hard"));
    report.overall = slice_from_json(sr.at("overall"));
    report.ep = slice_from_json(j.at("ep_accuracy"));
    report.ex_without_hi = slice_from_json(j.at("ex_accuracy_without_hi"));
    report.ex_with_hi = slice_from_json(j.at("ex_accuracy_with_hi"));
    report.hi_count = j.at("hi_count").get<int>();
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("metrics report: ") + e.what());
  }
  return report;
}

}  // namespace perpilot
