#include "perpilot/sim_env.hpp"

#include <fstream>

#include "json.hpp"

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

using nlohmann::json;
using nlohmann::ordered_json;

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("scenario " + path.string() + ": " + e.what());
  }
  Scenario s;
  try {
    const json profile = doc.value("profile", json::object());
    for (const auto& [k, v] : profile.items()) {
      s.profile[text::normalize(k)] = v.get<std::string>();
    }
    const json apps = doc.value("apps", json::object());
    for (const auto& [app, facts] : apps.items()) {
      auto& table = s.apps[app];
      for (const auto& [k, v] : facts.items()) {
        table[text::normalize(k)] = v.get<std::string>();
      }
    }
    const json aliases = doc.value("aliases", json::object());
    for (const auto& [k, v] : aliases.items()) {
      s.aliases[text::normalize(k)] = text::normalize(v.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError("scenario " + path.string() + ": " + e.what());
  }
  return s;
}

void Scenario::save(const std::filesystem::path& path) const {
  ordered_json doc;
  doc["profile"] = ordered_json::object();
  for (const auto& [k, v] : profile) doc["profile"][k] = v;
  doc["apps"] = ordered_json::object();
  for (const auto& [app, table] : apps) {
    doc["apps"][app] = ordered_json::object();
    for (const auto& [k, v] : table) doc["apps"][app][k] = v;
  }
  doc["aliases"] = ordered_json::object();
  for (const auto& [k, v] : aliases) doc["aliases"][k] = v;

  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scenario file: " + path.string());
  out << doc.dump(2) << "\n";
}

std::vector<std::string> Scenario::installed_apps() const {
  std::vector<std::string> names;
  names.reserve(apps.size());
  for (const auto& [app, table] : apps) names.push_back(app);
  return names;
}

std::string Scenario::canonical(std::string_view phrase) const {
  const std::string n = text::normalize(phrase);
  const auto it = aliases.find(n);
  return it == aliases.end() ? n : it->second;
}

std::optional<std::string> Scenario::truth(std::string_view element) const {
  const std::string key = canonical(element);
  if (auto it = profile.find(key); it != profile.end()) return it->second;
  // the profile may itself be keyed by an alias
  for (const auto& [k, v] : profile) {
    if (canonical(k) == key) return v;
  }
  return std::nullopt;
}

std::string explore_wire(const ExplorationInstruction& instr, const Scenario& scenario) {
  const std::map<std::string, std::string>* table = nullptr;
  for (const auto& [app, facts] : scenario.apps) {
    if (text::iequals(app, instr.app)) {
      table = &facts;
      break;
    }
  }
  if (table == nullptr) {
    throw ValidationError("app not installed in scenario: '" + instr.app + "'");
  }
  const std::string want = scenario.canonical(instr.element);
  for (const auto& [key, value] : *table) {
    if (scenario.canonical(key) == want) return "Stop|" + value;
  }
  return "No information about " + instr.element + " was found in " + instr.app + ".";
}

AgentReport explore(const ExplorationInstruction& instr, const Scenario& scenario) {
  return parse_agent_report(explore_wire(instr, scenario));
}

namespace {

// lowercase, collapse whitespace, strip terminal punctuation
std::string judge_normalize(std::string_view s) {
  std::string n = text::normalize(s);
  while (!n.empty() && (n.back() == '.' || n.back() == '!' || n.back() == '?' ||
                        n.back() == ',' || n.back() == ';')) {
    n.pop_back();
  }
  return text::trim(n);
}

}  // namespace

ExecutionVerdict judge(const std::string& final_instruction,
                       const Instruction& record, const Scenario& scenario) {
  std::vector<SlotBinding> slots;
  try {
    slots = bind_slots(record);
  } catch (const ValidationError& e) {
    return {false, std::string("record is not judgeable: ") + e.what()};
  }

  // Expected text: the completed template with personalized slots replaced by
  // scenario ground truth and explicit slots kept verbatim.
  std::string expected;
  std::size_t pos = 0;
  const std::string& t = record.text;
  for (const auto& slot : slots) {
    expected += t.substr(pos, slot.offset - pos);
    if (slot.personalized) {
      const auto value = scenario.truth(slot.phrase);
      if (!value) {
        return {false, "no ground truth for element '" + slot.phrase + "'"};
      }
      expected += *value;
    } else {
      expected += slot.phrase;
    }
    pos = slot.offset + slot.phrase.size();
  }
  expected += t.substr(pos);

  if (judge_normalize(final_instruction) == judge_normalize(expected)) {
    return {true, ""};
  }
  for (const auto& slot : slots) {
    if (slot.personalized && text::icontains(final_instruction, slot.phrase)) {
      return {false, "unresolved element '" + slot.phrase + "'"};
    }
  }
  return {false, "final instruction does not match the expected completion"};
}

}  // namespace perpilot
