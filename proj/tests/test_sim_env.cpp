#include "doctest.h"

#include <filesystem>

#include "perpilot/dataset.hpp"
#include "perpilot/errors.hpp"
#include "perpilot/fixtures.hpp"
#include "perpilot/sim_env.hpp"
#include "perpilot/text.hpp"

using namespace perpilot;

namespace {

Scenario walkthrough_scenario() {
  Scenario s;
  s.profile = {{"my school", "test school"}, {"my friend", "jack"}};
  s.apps["wechat"] = {{"my friend", "jack"}};
  s.apps["TikTok"] = {};
  return s;
}

Instruction walkthrough_record() {
  Instruction r;
  r.id = 1;
  r.text = "Open TikTok, search for a video about my school, and share it with my friend.";
  r.difficulty = Difficulty::Normal;
  r.min_steps = 9;
  r.apps = {"TikTok", "wechat"};
  r.completed_template =
      "Open TikTok, search for a video about {school name}, and share it with {name}.";
  r.gold_elements = {"my school", "my friend"};
  r.info_types = {"school name", "name"};
  return r;
}

}  // namespace

TEST_CASE("explore answers on the agent wire and hits the fact table") {
  const Scenario s = walkthrough_scenario();
  const ExplorationInstruction instr{
      "wechat", "my friend", "From the app wechat, obtain my friend name information."};
  CHECK(explore_wire(instr, s) == "Stop|jack");
  const AgentReport report = explore(instr, s);
  CHECK(report.finished);
  CHECK(report.info == "jack");
}

TEST_CASE("explore misses when the app lacks the fact") {
  const Scenario s = walkthrough_scenario();
  const AgentReport report = explore({"TikTok", "my friend", "..."}, s);
  CHECK_FALSE(report.finished);
  CHECK_THROWS_AS(explore({"Instagram", "my friend", "..."}, s), ValidationError);
}

TEST_CASE("explore matches app names case-insensitively and keys via aliases") {
  Scenario s;
  s.apps["Taobao"] = {{"my home", "xi'an road 5"}};
  s.aliases["home"] = "my home";
  const AgentReport direct = explore({"taobao", "my home", "..."}, s);
  CHECK(direct.finished);
  CHECK(direct.info == "xi'an road 5");
  const AgentReport aliased = explore({"Taobao", "home", "..."}, s);
  CHECK(aliased.finished);
  CHECK(aliased.info == "xi'an road 5");
}

TEST_CASE("scenario files round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "perpilot_scenario.json";
  Scenario s = walkthrough_scenario();
  s.aliases["friend"] = "my friend";
  s.save(path);
  const Scenario loaded = Scenario::load(path);
  CHECK(loaded.profile == s.profile);
  CHECK(loaded.apps == s.apps);
  CHECK(loaded.aliases == s.aliases);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(Scenario::load(path), ParseError);
}

TEST_CASE("judge accepts the completed walkthrough instruction") {
  const auto verdict = judge(
      "Open TikTok, search for a video about test school, and share it with jack.",
      walkthrough_record(), walkthrough_scenario());
  CHECK(verdict.success);
}

TEST_CASE("judge rejects a still-raw instruction naming the unresolved element") {
  const auto verdict = judge(walkthrough_record().text, walkthrough_record(),
                             walkthrough_scenario());
  CHECK_FALSE(verdict.success);
  CHECK(verdict.reason.find("unresolved element") != std::string::npos);
}

TEST_CASE("judge rejects misspelled values") {
  const auto verdict = judge(
      "Open TikTok, search for a video about test school, and share it with jak.",
      walkthrough_record(), walkthrough_scenario());
  CHECK_FALSE(verdict.success);
}

TEST_CASE("judge normalization: case, whitespace, terminal punctuation") {
  const auto& record = walkthrough_record();
  const auto& scenario = walkthrough_scenario();
  CHECK(judge("  open tiktok,  search for a video about TEST SCHOOL, and share it "
              "with Jack",
              record, scenario)
            .success);
  CHECK(judge("Open TikTok, search for a video about test school, and share it with "
              "jack.!?",
              record, scenario)
            .success);
}

TEST_CASE("judge fails with a reason when the scenario lacks a truth value") {
  Scenario scenario = walkthrough_scenario();
  scenario.profile.erase("my friend");
  const auto verdict = judge(
      "Open TikTok, search for a video about test school, and share it with jack.",
      walkthrough_record(), scenario);
  CHECK_FALSE(verdict.success);
  CHECK(verdict.reason.find("no ground truth") != std::string::npos);
  CHECK(verdict.reason.find("my friend") != std::string::npos);
}

TEST_CASE("explicit records judge against their own text") {
  Instruction r;
  r.id = 2;
  r.text = "call David.";
  r.apps = {"Phone"};
  r.min_steps = 4;
  r.completed_template = "call {name}.";
  r.info_types = {"name"};
  const Scenario empty;
  CHECK(judge("call David.", r, empty).success);
  CHECK(judge("call DAVID", r, empty).success);
  CHECK_FALSE(judge("call Eve.", r, empty).success);
}

TEST_CASE("self-consistency sweep: template plus truths judges success for all 75") {
  const auto corpus = load_corpus(std::filesystem::path(PERPILOT_DATA_DIR) /
                                  "perinstruct.json");
  const auto fixture = build_gold_fixture(corpus);
  for (const auto& record : corpus) {
    // assemble the expected completion straight from the slots
    std::string completed;
    std::size_t pos = 0;
    for (const auto& slot : bind_slots(record)) {
      completed += record.text.substr(pos, slot.offset - pos);
      completed += slot.personalized
                       ? fixture.truths.at(text::normalize(slot.phrase))
                       : slot.phrase;
      pos = slot.offset + slot.phrase.size();
    }
    completed += record.text.substr(pos);
    const auto verdict = judge(completed, record, fixture.scenario);
    CHECK_MESSAGE(verdict.success, "record ", record.id, ": ", verdict.reason);
  }
}
