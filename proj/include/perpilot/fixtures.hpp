#pragma once

#include <map>
#include <string>
#include <vector>

#include "perpilot/dataset.hpp"
#include "perpilot/llm_backend.hpp"
#include "perpilot/sim_env.hpp"

namespace perpilot {

// Synthetic ground truth for running a corpus without a live model or device:
// a scenario whose profile/app facts cover every gold element, plus a mock
// script answering exactly the perception and exploration prompts the
// pipeline will issue (simulating the memory evolution of an in-order run
// starting from an empty store).
struct GoldFixture {
  Scenario scenario;
  MockScript script;
  std::map<std::string, std::string> truths;  // normalized element -> value
};

GoldFixture build_gold_fixture(const std::vector<Instruction>& corpus);

}  // namespace perpilot
