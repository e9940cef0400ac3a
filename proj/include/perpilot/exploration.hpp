#pragma once

#include <string>
#include <vector>

namespace perpilot {

struct ExplorationInstruction {
  std::string app;      // as written in the plan line; matched to the app
                        // list case-insensitively
  std::string element;  // the unresolved phrase this line targets
  std::string text;     // the full plan line, contains the element verbatim
};

struct AgentReport {
  bool finished = false;
  std::string info;  // non-empty whenever finished is true
};

std::string build_exploration_prompt(const std::string& instruction_text,
                                     const std::vector<std::string>& unresolved,
                                     const std::vector<std::string>& app_list);

// Splits raw into non-empty lines of the form "From the app <APP>, obtain ...".
// Each line must name an installed app and mention exactly one unresolved
// element; the result has exactly one instruction per unresolved element, in
// unresolved order. Violations throw PlanError with a distinct kind.
std::vector<ExplorationInstruction> parse_exploration_plan(
    const std::string& raw, const std::vector<std::string>& unresolved,
    const std::vector<std::string>& app_list);

// Total: accepts "FINISH|<info>" or "Stop|<info>" (keyword case-insensitive,
// whitespace tolerated); everything else is a not-finished report.
AgentReport parse_agent_report(const std::string& raw) noexcept;

}  // namespace perpilot
