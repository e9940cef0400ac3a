#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perpilot/dataset.hpp"
#include "perpilot/exploration.hpp"

namespace perpilot {

// Deterministic stand-in for a real handset: installed apps expose fact
// tables, and a profile holds the ground-truth value of every element a
// scenario covers. Immutable after load; all operations are pure.
struct Scenario {
  // normalized element phrase -> ground-truth value
  std::map<std::string, std::string> profile;
  // app name -> (normalized fact key -> value)
  std::map<std::string, std::map<std::string, std::string>> apps;
  // normalized alias -> normalized canonical phrase ("friend" -> "my friend")
  std::map<std::string, std::string> aliases;

  static Scenario load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::vector<std::string> installed_apps() const;
  // Alias-aware profile lookup.
  std::optional<std::string> truth(std::string_view element) const;
  // Canonical key for alias-aware matching.
  std::string canonical(std::string_view phrase) const;
};

struct ExecutionVerdict {
  bool success = false;
  std::string reason;
};

// Executes one exploration instruction: alias-aware lookup of the element in
// the app's fact table. The simulated agent answers on the Appendix-style
// wire ("Stop|<value>" on a hit); the reply is parsed back into an
// AgentReport. Unknown app throws ValidationError.
AgentReport explore(const ExplorationInstruction& instr, const Scenario& scenario);

// Raw terminal string of the simulated agent for one instruction (what
// explore() parses). Exposed for trace logging.
std::string explore_wire(const ExplorationInstruction& instr, const Scenario& scenario);

// Success iff final_instruction equals the record's completed_template with
// every placeholder filled: personalized slots take the scenario truth of
// their element, explicit slots keep their original span. Comparison is
// case-, whitespace- and terminal-punctuation-insensitive. A personalized
// slot without a scenario truth value yields a failure verdict.
ExecutionVerdict judge(const std::string& final_instruction,
                       const Instruction& record, const Scenario& scenario);

}  // namespace perpilot
