// Generates the synthetic ground-truth fixture for a corpus: a scenario file
// whose app fact tables cover every gold element, and a mock script answering
// exactly the prompts an in-order run (starting from empty memory) will send.
#include <iostream>

#include "CLI11.hpp"

#include "perpilot/dataset.hpp"
#include "perpilot/errors.hpp"
#include "perpilot/fixtures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a gold scenario + mock script for a corpus"};
  std::string corpus_path, scenario_path = "scenario.json", script_path = "mock_script.json";
  app.add_option("--corpus", corpus_path, "corpus file")->required();
  app.add_option("--scenario", scenario_path, "output scenario file");
  app.add_option("--script", script_path, "output mock script file");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto corpus = perpilot::load_corpus(corpus_path);
    const auto fixture = perpilot::build_gold_fixture(corpus);
    fixture.scenario.save(scenario_path);
    fixture.script.save(script_path);
    std::cout << "scenario: " << scenario_path << " (" << fixture.scenario.apps.size()
              << " apps, " << fixture.scenario.profile.size() << " truths)\n";
    std::cout << "script:   " << script_path << " (" << fixture.script.entries.size()
              << " entries)\n";
  } catch (const perpilot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
