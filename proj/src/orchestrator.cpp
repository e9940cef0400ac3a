#include "perpilot/orchestrator.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "perpilot/errors.hpp"
#include "perpilot/exploration.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

using nlohmann::ordered_json;

std::string_view to_string(ResolutionSource s) {
  switch (s) {
    case ResolutionSource::Memory: return "memory";
    case ResolutionSource::Exploration: return "exploration";
    case ResolutionSource::Human: return "human";
    case ResolutionSource::Unresolved: return "unresolved";
  }
  return "unresolved";
}

std::optional<ResolutionSource> parse_resolution_source(std::string_view s) {
  if (s == "memory") return ResolutionSource::Memory;
  if (s == "exploration") return ResolutionSource::Exploration;
  if (s == "human") return ResolutionSource::Human;
  if (s == "unresolved") return ResolutionSource::Unresolved;
  return std::nullopt;
}

std::string RunTrace::to_json_line() const {
  ordered_json j;
  j["id"] = instruction_id;
  j["text"] = raw_text;
  j["perception"] = ordered_json{{"raw", perception_raw},
                                 {"personalized", perceived_personalized},
                                 {"elements", perceived_elements}};
  j["retrieval"] = ordered_json{{"case", retrieval_case},
                                {"remaining", remaining_after_retrieval}};
  ordered_json attempts = ordered_json::array();
  for (const auto& a : exploration_attempts) {
    attempts.push_back(ordered_json{{"element", a.element},
                                    {"app", a.app},
                                    {"report_raw", a.report_raw},
                                    {"finished", a.report.finished},
                                    {"info", a.report.info},
                                    {"error", a.error}});
  }
  j["exploration"] = ordered_json{{"plan_raw", exploration_plan_raw},
                                  {"attempts", attempts}};
  ordered_json interventions_json = ordered_json::array();
  for (const auto& iv : interventions) {
    interventions_json.push_back(ordered_json{{"element", iv.element}, {"value", iv.value}});
  }
  j["interventions"] = interventions_json;
  ordered_json sources_json = ordered_json::object();
  for (const auto& [element, source] : sources) {
    sources_json[element] = std::string(to_string(source));
  }
  j["sources"] = sources_json;
  j["final"] = final_instruction;
  j["verdict"] = ordered_json{{"success", success}, {"reason", verdict_reason}};
  j["stage_errors"] = stage_errors;
  return j.dump();
}

RunTrace RunTrace::from_json_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("trace line: ") + e.what());
  }
  RunTrace t;
  try {
    t.instruction_id = j.at("id").get<int>();
    t.raw_text = j.at("text").get<std::string>();
    const auto& p = j.at("perception");
    t.perception_raw = p.at("raw").get<std::string>();
    t.perceived_personalized = p.at("personalized").get<bool>();
    t.perceived_elements = p.at("elements").get<std::vector<std::string>>();
    const auto& r = j.at("retrieval");
    t.retrieval_case = r.at("case").get<std::string>();
    t.remaining_after_retrieval = r.at("remaining").get<std::vector<std::string>>();
    const auto& x = j.at("exploration");
    t.exploration_plan_raw = x.at("plan_raw").get<std::string>();
    for (const auto& a : x.at("attempts")) {
      ExplorationAttempt attempt;
      attempt.element = a.at("element").get<std::string>();
      attempt.app = a.at("app").get<std::string>();
      attempt.report_raw = a.at("report_raw").get<std::string>();
      attempt.report.finished = a.at("finished").get<bool>();
      attempt.report.info = a.at("info").get<std::string>();
      attempt.error = a.at("error").get<std::string>();
      t.exploration_attempts.push_back(std::move(attempt));
    }
    for (const auto& iv : j.at("interventions")) {
      t.interventions.push_back(
          {iv.at("element").get<std::string>(), iv.at("value").get<std::string>()});
    }
    for (const auto& [element, source] : j.at("sources").items()) {
      const auto parsed = parse_resolution_source(source.get<std::string>());
      if (!parsed) throw ParseError("trace line: unknown source " + source.dump());
      t.sources[element] = *parsed;
    }
    t.final_instruction = j.at("final").get<std::string>();
    t.success = j.at("verdict").at("success").get<bool>();
    t.verdict_reason = j.at("verdict").at("reason").get<std::string>();
    t.stage_errors = j.at("stage_errors").get<std::vector<std::string>>();
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("trace line: ") + e.what());
  }
  return t;
}

InterventionHook InterventionHook::disabled() { return InterventionHook(); }

InterventionHook InterventionHook::scripted(std::map<std::string, std::string> values) {
  InterventionHook hook;
  hook.mode_ = Mode::Scripted;
  for (auto& [element, value] : values) {
    hook.values_[text::normalize(element)] = value;
  }
  return hook;
}

InterventionHook InterventionHook::interactive(std::istream& in, std::ostream& out) {
  InterventionHook hook;
  hook.mode_ = Mode::Interactive;
  hook.in_ = &in;
  hook.out_ = &out;
  return hook;
}

std::optional<std::string> InterventionHook::request(const std::string& element) const {
  switch (mode_) {
    case Mode::Disabled:
      return std::nullopt;
    case Mode::Scripted: {
      const auto it = values_.find(text::normalize(element));
      if (it == values_.end()) return std::nullopt;
      return it->second;
    }
    case Mode::Interactive: {
      *out_ << "Please provide a value for '" << element << "': " << std::flush;
      std::string line;
      if (!std::getline(*in_, line)) return std::nullopt;
      line = text::trim(line);
      if (line.empty()) return std::nullopt;
      return line;
    }
  }
  return std::nullopt;
}

namespace {

void set_source_if_absent(RunTrace& trace, const std::string& element,
                          ResolutionSource source) {
  const std::string key = text::normalize(element);
  if (trace.sources.find(key) == trace.sources.end()) trace.sources[key] = source;
}

void judge_final(RunTrace& trace, const Instruction& record, const Scenario& scenario) {
  const ExecutionVerdict verdict = judge(trace.final_instruction, record, scenario);
  trace.success = verdict.success;
  trace.verdict_reason = verdict.reason;
}

}  // namespace

RunTrace run_one(const Instruction& record, MemoryStore& store,
                 const Scenario& scenario, LlmBackend& backend,
                 const InterventionHook& hook) {
  RunTrace trace;
  trace.instruction_id = record.id;
  trace.raw_text = record.text;
  trace.final_instruction = record.text;

  // 1. perceive
  PerceptionResult perception;
  try {
    trace.perception_raw = backend.complete(build_perception_prompt(record.text));
    perception = parse_perception(trace.perception_raw);
  } catch (const Error& e) {
    trace.stage_errors.push_back(std::string("perception: ") + e.what());
    judge_final(trace, record, scenario);
    return trace;
  }
  trace.perceived_personalized = perception.is_personalized;
  trace.perceived_elements = perception.elements;

  if (!perception.is_personalized) {
    // explicit instruction: pass through unchanged
    judge_final(trace, record, scenario);
    return trace;
  }

  // 2. memory retrieval
  RetrievalOutcome outcome;
  try {
    outcome = retrieve_complete(record.text, perception.elements, store);
  } catch (const Error& e) {
    trace.stage_errors.push_back(std::string("retrieval: ") + e.what());
    judge_final(trace, record, scenario);
    return trace;
  }
  trace.retrieval_case = std::string(to_string(outcome.kind));
  trace.remaining_after_retrieval = outcome.remaining_elements;
  for (const auto& element : perception.elements) {
    const bool remained =
        std::any_of(outcome.remaining_elements.begin(), outcome.remaining_elements.end(),
                    [&](const std::string& r) {
                      return text::normalize(r) == text::normalize(element);
                    });
    if (!remained) set_source_if_absent(trace, element, ResolutionSource::Memory);
  }

  // 3. exploration with memory write-back, human fallback per element
  if (!outcome.remaining_elements.empty()) {
    const std::vector<std::string>& remaining = outcome.remaining_elements;
    std::vector<ExplorationInstruction> plan;
    bool plan_ok = false;
    try {
      const std::string prompt =
          build_exploration_prompt(record.text, remaining, scenario.installed_apps());
      trace.exploration_plan_raw = backend.complete(prompt);
      plan = parse_exploration_plan(trace.exploration_plan_raw, remaining,
                                    scenario.installed_apps());
      plan_ok = true;
    } catch (const Error& e) {
      trace.stage_errors.push_back(std::string("exploration plan: ") + e.what());
    }

    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const std::string& element = remaining[i];
      ExplorationAttempt attempt;
      attempt.element = element;
      if (plan_ok) {
        attempt.app = plan[i].app;
        try {
          attempt.report_raw = explore_wire(plan[i], scenario);
          attempt.report = parse_agent_report(attempt.report_raw);
        } catch (const Error& e) {
          attempt.error = e.what();
        }
      } else {
        attempt.error = "no exploration plan";
      }
      trace.exploration_attempts.push_back(attempt);

      if (attempt.report.finished) {
        store.put(element, attempt.report.info);
        set_source_if_absent(trace, element, ResolutionSource::Exploration);
        continue;
      }
      // explore first, ask last
      if (const auto value = hook.request(element)) {
        store.put(element, *value);
        trace.interventions.push_back({element, *value});
        set_source_if_absent(trace, element, ResolutionSource::Human);
      } else {
        set_source_if_absent(trace, element, ResolutionSource::Unresolved);
      }
    }

    // 4. complete again with whatever the run learned
    try {
      outcome = retrieve_complete(record.text, perception.elements, store);
    } catch (const Error& e) {
      trace.stage_errors.push_back(std::string("completion: ") + e.what());
      judge_final(trace, record, scenario);
      return trace;
    }
  }

  trace.final_instruction = outcome.instruction_text;

  // 5. judge
  judge_final(trace, record, scenario);
  return trace;
}

std::vector<RunTrace> run_corpus(const std::vector<Instruction>& corpus,
                                 MemoryStore& store, const Scenario& scenario,
                                 LlmBackend& backend, const InterventionHook& hook,
                                 const RunOptions& options) {
  std::vector<const Instruction*> ordered;
  ordered.reserve(corpus.size());
  for (const auto& r : corpus) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const Instruction* a, const Instruction* b) { return a->id < b->id; });

  std::vector<RunTrace> traces;
  traces.reserve(corpus.size());
  for (const Instruction* record : ordered) {
    RunTrace trace = run_one(*record, store, scenario, backend, hook);
    const bool failed_stage = !trace.stage_errors.empty();
    if (options.on_trace) options.on_trace(trace);
    traces.push_back(std::move(trace));
    if (options.fail_fast && failed_stage) break;
  }
  return traces;
}

void save_traces(const std::vector<RunTrace>& traces, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write trace file: " + path.string());
  for (const auto& t : traces) out << t.to_json_line() << "\n";
}

std::vector<RunTrace> load_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file: " + path.string());
  std::vector<RunTrace> traces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      traces.push_back(RunTrace::from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError("trace file " + path.string() + ", line " +
                       std::to_string(lineno) + ": " + e.what());
    }
  }
  return traces;
}

}  // namespace perpilot
