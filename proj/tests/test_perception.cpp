#include "doctest.h"

#include <filesystem>
#include <random>

#include "perpilot/dataset.hpp"
#include "perpilot/errors.hpp"
#include "perpilot/fixtures.hpp"
#include "perpilot/perception.hpp"
#include "perpilot/text.hpp"

using namespace perpilot;

TEST_CASE("perception prompt carries the rules and the output format") {
  const std::string prompt = build_perception_prompt("call David.");
  CHECK(prompt.find("Strictly prohibit treating specific names as personalized "
                    "elements") != std::string::npos);
  CHECK(prompt.find("Yes|First personalized element") != std::string::npos);
  CHECK(prompt.find("The current instruction is as follows:call David.") !=
        std::string::npos);
  CHECK(prompt.find("{instruction}") == std::string::npos);
  CHECK_THROWS_AS(build_perception_prompt(""), ValidationError);
  CHECK_THROWS_AS(build_perception_prompt("  "), ValidationError);
}

TEST_CASE("parse_perception accepts the two verdict shapes") {
  const auto yes = parse_perception("Yes|my school|my friend");
  CHECK(yes.is_personalized);
  CHECK(yes.elements == std::vector<std::string>{"my school", "my friend"});

  const auto no = parse_perception("No");
  CHECK_FALSE(no.is_personalized);
  CHECK(no.elements.empty());

  CHECK_FALSE(parse_perception("  no \n").is_personalized);
  CHECK_FALSE(parse_perception("NO").is_personalized);
  CHECK(parse_perception("yes| my home ").elements ==
        std::vector<std::string>{"my home"});
}

TEST_CASE("parse_perception deduplicates and trims elements") {
  const auto result = parse_perception("Yes|my friend|my friend");
  CHECK(result.elements == std::vector<std::string>{"my friend"});
  const auto mixed = parse_perception("Yes| My Friend |my friend|my home");
  CHECK(mixed.elements == std::vector<std::string>{"My Friend", "my home"});
}

TEST_CASE("parse_perception rejects everything else") {
  CHECK_THROWS_AS(parse_perception("maybe"), GrammarError);
  CHECK_THROWS_AS(parse_perception(""), GrammarError);
  CHECK_THROWS_AS(parse_perception("Yes"), GrammarError);
  CHECK_THROWS_AS(parse_perception("Yes|||"), GrammarError);
  CHECK_THROWS_AS(parse_perception("No|my friend"), GrammarError);
  CHECK_THROWS_AS(parse_perception("Sure, the elements are: my home"), GrammarError);
  try {
    parse_perception("gibberish output");
  } catch (const GrammarError& e) {
    CHECK(e.raw == "gibberish output");
  }
}

TEST_CASE("serialize/parse round-trips perception results") {
  for (const auto& raw : {"No", "Yes|my school|my friend", "Yes|a"}) {
    const auto once = parse_perception(raw);
    CHECK(parse_perception(serialize_perception(once)) == once);
    CHECK(serialize_perception(once) == raw);
  }
}

TEST_CASE("parse_perception never yields personalized with no elements") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> len_dist(0, 40);
  const std::string alphabet = "YyEeSsNnOo| \trandomtext";
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string raw;
    const int len = len_dist(rng);
    for (int i = 0; i < len; ++i) raw.push_back(alphabet[ch(rng)]);
    try {
      const auto result = parse_perception(raw);
      if (result.is_personalized) {
        CHECK_FALSE(result.elements.empty());
        for (const auto& e : result.elements) CHECK_FALSE(text::trim(e).empty());
      } else {
        CHECK(result.elements.empty());
      }
    } catch (const GrammarError&) {
      // rejection is a valid outcome
    }
  }
}

TEST_CASE("perceive composes prompt, backend and parser") {
  MockScript script;
  script.entries.push_back({"Set an alarm for 7:30 am", MatchMode::Substring, "No"});
  script.entries.push_back({"Navigate to my home", MatchMode::Substring, "Yes|my home"});
  MockBackend backend(script);

  const auto alarm = perceive("Set an alarm for 7:30 am", backend);
  CHECK_FALSE(alarm.is_personalized);

  const auto navigate = perceive("Navigate to my home", backend);
  CHECK(navigate.is_personalized);
  CHECK(navigate.elements == std::vector<std::string>{"my home"});
  CHECK(backend.calls() == 2);
}

TEST_CASE("grammar errors surface instead of being coerced to No") {
  MockScript script;
  script.entries.push_back({"", MatchMode::Substring, "I think it is personalized."});
  MockBackend backend(script);
  CHECK_THROWS_AS(perceive("Navigate to my home", backend), GrammarError);
}

TEST_CASE("gold-scripted mock recovers every corpus element set") {
  const auto corpus = load_corpus(std::filesystem::path(PERPILOT_DATA_DIR) /
                                  "perinstruct.json");
  const auto fixture = build_gold_fixture(corpus);
  MockBackend backend(fixture.script);
  for (const auto& record : corpus) {
    const auto result = perceive(record.text, backend);
    CHECK(result.is_personalized == record.personalized());
    REQUIRE(result.elements.size() == record.gold_elements.size());
    for (std::size_t i = 0; i < result.elements.size(); ++i) {
      CHECK(text::normalize(result.elements[i]) ==
            text::normalize(record.gold_elements[i]));
    }
  }
}
