#include "perpilot/exploration.hpp"

#include <algorithm>

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

namespace {

constexpr const char* kExplorationPrompt =
    R"(You need to assist me in completing an information exploration task. The specific task information is as follows:
You are currently controlling the user's phone to complete the personalized instruction {instruction}, but those personalized information: {search_element} (You only need to deal with the personalized elements in parentheses) in the instruction is missing.
I am now trying to obtain the precise information for these personalized elements from the user's phone.

It is known that the user's phone has the following apps:
{app_lists}

Please carefully consider the types of these apps and the information they may contain. For each personalized element, select the app that is most likely to store the corresponding precise information (note that each personalized element can only select one app, do not select multiple apps).

Output the same number of instructions as the number of personalized elements (do not output extra instructions, only output one instruction per personalized element, strictly forbidden to output extra instructions), each instruction should be in the format 'From the app XX, obtain the YY (the YY is personalized element and personalized element must be included in the sentence) XX information (here, XX is the type of information you need to obtain, for example From QQ, obtain the friend name information. please note one instruction per line)'.)";

// Which unresolved elements a line mentions, longest phrase first with span
// masking so "friend" inside "friend's phone number" is not double-counted.
std::vector<std::size_t> mentioned_elements(const std::string& line,
                                            const std::vector<std::string>& unresolved) {
  std::vector<std::size_t> order(unresolved.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (unresolved[a].size() != unresolved[b].size())
      return unresolved[a].size() > unresolved[b].size();
    return a < b;
  });

  std::vector<bool> masked(line.size(), false);
  std::vector<std::size_t> mentioned;
  for (std::size_t idx : order) {
    const std::string& phrase = unresolved[idx];
    std::size_t from = 0;
    bool hit = false;
    while (auto pos = text::ifind(line, phrase, from)) {
      const bool clear = std::none_of(masked.begin() + long(*pos),
                                      masked.begin() + long(*pos + phrase.size()),
                                      [](bool m) { return m; });
      if (clear) {
        std::fill(masked.begin() + long(*pos), masked.begin() + long(*pos + phrase.size()),
                  true);
        hit = true;
      }
      from = *pos + 1;
    }
    if (hit) mentioned.push_back(idx);
  }
  std::sort(mentioned.begin(), mentioned.end());
  return mentioned;
}

}  // namespace

std::string build_exploration_prompt(const std::string& instruction_text,
                                     const std::vector<std::string>& unresolved,
                                     const std::vector<std::string>& app_list) {
  if (text::trim(instruction_text).empty()) throw ValidationError("empty instruction text");
  if (unresolved.empty()) throw ValidationError("no unresolved elements to explore");
  if (app_list.empty()) throw ValidationError("empty app list");
  return text::fill_template(kExplorationPrompt,
                             {{"instruction", instruction_text},
                              {"search_element", text::quoted_list(unresolved)},
                              {"app_lists", text::quoted_list(app_list)}});
}

std::vector<ExplorationInstruction> parse_exploration_plan(
    const std::string& raw, const std::vector<std::string>& unresolved,
    const std::vector<std::string>& app_list) {
  const std::vector<std::string> lines = text::split_lines(raw);
  if (lines.size() != unresolved.size()) {
    throw PlanError(PlanErrorKind::CountMismatch,
                    "plan has " + std::to_string(lines.size()) + " instructions for " +
                        std::to_string(unresolved.size()) + " unresolved elements");
  }

  constexpr std::string_view kPrefix = "from the app ";
  std::vector<ExplorationInstruction> by_element(unresolved.size());
  std::vector<bool> covered(unresolved.size(), false);

  for (const auto& line : lines) {
    if (!text::istarts_with(line, kPrefix)) {
      throw PlanError(PlanErrorKind::BadLine,
                      "line does not start with 'From the app ': " + line);
    }
    const std::size_t comma = line.find(',', kPrefix.size());
    if (comma == std::string::npos) {
      throw PlanError(PlanErrorKind::BadLine, "line has no ', obtain' clause: " + line);
    }
    const std::string app = text::trim(line.substr(kPrefix.size(), comma - kPrefix.size()));
    const std::string tail = text::trim(line.substr(comma + 1));
    if (app.empty() || !text::istarts_with(tail, "obtain")) {
      throw PlanError(PlanErrorKind::BadLine, "line has no ', obtain' clause: " + line);
    }
    const bool installed = std::any_of(app_list.begin(), app_list.end(),
                                       [&](const std::string& a) {
                                         return text::iequals(a, app);
                                       });
    if (!installed) {
      throw PlanError(PlanErrorKind::UnknownApp, "app not installed: '" + app + "'");
    }

    const auto mentioned = mentioned_elements(line, unresolved);
    if (mentioned.size() != 1) {
      throw PlanError(PlanErrorKind::ElementUnmentioned,
                      mentioned.empty()
                          ? "line mentions no unresolved element: " + line
                          : "line mentions several unresolved elements: " + line);
    }
    const std::size_t idx = mentioned.front();
    if (covered[idx]) {
      throw PlanError(PlanErrorKind::ElementUnmentioned,
                      "element '" + unresolved[idx] + "' is covered by several lines");
    }
    covered[idx] = true;
    by_element[idx] = ExplorationInstruction{app, unresolved[idx], line};
  }

  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) {
      throw PlanError(PlanErrorKind::ElementUnmentioned,
                      "no plan line mentions element '" + unresolved[i] + "'");
    }
  }
  return by_element;
}

AgentReport parse_agent_report(const std::string& raw) noexcept {
  const std::string t = text::trim(raw);
  for (std::string_view keyword : {"finish", "stop"}) {
    if (!text::istarts_with(t, keyword)) continue;
    std::string rest = text::trim(t.substr(keyword.size()));
    if (rest.empty() || rest[0] != '|') continue;
    const std::string info = text::trim(rest.substr(1));
    if (info.empty()) break;  // finished would imply non-empty info
    return {true, info};
  }
  return {};
}

}  // namespace perpilot
