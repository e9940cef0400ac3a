#include "perpilot/fixtures.hpp"

#include <algorithm>
#include <set>

#include "perpilot/errors.hpp"
#include "perpilot/exploration.hpp"
#include "perpilot/memory.hpp"
#include "perpilot/perception.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

GoldFixture build_gold_fixture(const std::vector<Instruction>& corpus) {
  GoldFixture fixture;

  std::vector<const Instruction*> ordered;
  for (const auto& r : corpus) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const Instruction* a, const Instruction* b) { return a->id < b->id; });

  // Ground truth: one opaque token per distinct element, placed in the first
  // app the owning record lists. Tokens carry no letters that could collide
  // with an element phrase during substitution.
  int counter = 0;
  for (const Instruction* record : ordered) {
    for (const auto& element : record->gold_elements) {
      const std::string key = text::normalize(element);
      if (fixture.truths.count(key)) continue;
      const std::string value = "gv" + std::to_string(++counter);
      fixture.truths[key] = value;
      fixture.scenario.profile[key] = value;
      fixture.scenario.apps[record->apps.front()][key] = value;
    }
    // every app a record lists is installed, fact table possibly empty
    for (const auto& app : record->apps) fixture.scenario.apps[app];
  }

  const std::vector<std::string> installed = fixture.scenario.installed_apps();

  // Script the exact prompts an in-order run over an initially empty memory
  // will issue: one perception entry per record, one exploration entry per
  // record that still has unresolved elements at that point.
  std::set<std::string> memory;
  for (const Instruction* record : ordered) {
    MockEntry perception;
    perception.mode = MatchMode::Exact;
    perception.matcher = build_perception_prompt(record->text);
    if (record->gold_elements.empty()) {
      perception.response = "No";
    } else {
      PerceptionResult gold{true, record->gold_elements};
      perception.response = serialize_perception(gold);
    }
    fixture.script.entries.push_back(std::move(perception));

    std::vector<std::string> remaining;
    for (const auto& element : record->gold_elements) {
      if (!memory.count(text::normalize(element))) remaining.push_back(element);
    }
    if (remaining.empty()) continue;

    MockEntry exploration;
    exploration.mode = MatchMode::Exact;
    exploration.matcher = build_exploration_prompt(record->text, remaining, installed);
    std::string plan;
    for (const auto& element : remaining) {
      plan += "From the app " + record->apps.front() + ", obtain the " + element +
              " information.\n";
      memory.insert(text::normalize(element));
    }
    exploration.response = plan;
    fixture.script.entries.push_back(std::move(exploration));
  }

  // Exact matchers must be unambiguous: the same prompt may not appear twice.
  std::set<std::string> prompts;
  for (const auto& entry : fixture.script.entries) {
    if (!prompts.insert(entry.matcher).second) {
      throw ValidationError("gold fixture: duplicate prompt in script");
    }
  }
  return fixture;
}

}  // namespace perpilot
