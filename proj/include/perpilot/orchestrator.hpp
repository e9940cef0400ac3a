#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perpilot/dataset.hpp"
#include "perpilot/llm_backend.hpp"
#include "perpilot/memory.hpp"
#include "perpilot/perception.hpp"
#include "perpilot/sim_env.hpp"

namespace perpilot {

enum class ResolutionSource { Memory, Exploration, Human, Unresolved };

std::string_view to_string(ResolutionSource s);
std::optional<ResolutionSource> parse_resolution_source(std::string_view s);

struct ExplorationAttempt {
  std::string element;
  std::string app;
  std::string report_raw;  // agent wire string
  AgentReport report;
  std::string error;  // non-empty when the attempt never reached the agent
};

struct InterventionEvent {
  std::string element;
  std::string value;
};

// Everything one pipeline pass over one instruction did, in order. Traces
// serialize to single-line JSON objects and round-trip losslessly.
struct RunTrace {
  int instruction_id = 0;
  std::string raw_text;

  std::string perception_raw;
  bool perceived_personalized = false;
  std::vector<std::string> perceived_elements;

  std::string retrieval_case;  // "completed" | "partial" | "missing" | ""
  std::vector<std::string> remaining_after_retrieval;

  std::string exploration_plan_raw;
  std::vector<ExplorationAttempt> exploration_attempts;
  std::vector<InterventionEvent> interventions;

  // normalized element -> how this run resolved it
  std::map<std::string, ResolutionSource> sources;

  std::string final_instruction;
  bool success = false;
  std::string verdict_reason;
  std::vector<std::string> stage_errors;

  std::string to_json_line() const;
  static RunTrace from_json_line(const std::string& line);
};

// Fallback that supplies a value for an element exploration could not find.
class InterventionHook {
 public:
  enum class Mode { Interactive, Scripted, Disabled };

  static InterventionHook disabled();
  static InterventionHook scripted(std::map<std::string, std::string> values);
  static InterventionHook interactive(std::istream& in, std::ostream& out);

  std::optional<std::string> request(const std::string& element) const;
  Mode mode() const { return mode_; }

 private:
  InterventionHook() = default;
  Mode mode_ = Mode::Disabled;
  std::map<std::string, std::string> values_;  // normalized element -> value
  std::istream* in_ = nullptr;
  std::ostream* out_ = nullptr;
};

// One pass of the pipeline: perceive -> memory retrieval -> exploration with
// memory write-back -> intervention fallback -> final completion -> judge.
// Total: backend/grammar/substitution failures end up in the trace, never
// out of this function.
RunTrace run_one(const Instruction& record, MemoryStore& store,
                 const Scenario& scenario, LlmBackend& backend,
                 const InterventionHook& hook);

struct RunOptions {
  bool fail_fast = false;  // stop after the first stage-error record
  std::function<void(const RunTrace&)> on_trace;
};

// Sequential run over records in id order, threading the evolving store.
std::vector<RunTrace> run_corpus(const std::vector<Instruction>& corpus,
                                 MemoryStore& store, const Scenario& scenario,
                                 LlmBackend& backend,
                                 const InterventionHook& hook,
                                 const RunOptions& options = {});

void save_traces(const std::vector<RunTrace>& traces,
                 const std::filesystem::path& path);
std::vector<RunTrace> load_traces(const std::filesystem::path& path);

}  // namespace perpilot
