// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "perpilot/dataset.hpp"
#include "perpilot/errors.hpp"
#include "perpilot/evaluation.hpp"
#include "perpilot/exploration.hpp"
#include "perpilot/fixtures.hpp"
#include "perpilot/memory.hpp"
#include "perpilot/orchestrator.hpp"
#include "perpilot/perception.hpp"
#include "perpilot/sim_env.hpp"
#include "perpilot/text.hpp"

using namespace perpilot;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int failures = 0;
  std::ostringstream notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      notes << "\n    FAILED: " << what;
    }
  }
};

int g_failed_criteria = 0;

void report(int number, const std::string& title, const Criterion& c,
            const std::string& extra = "") {
  if (c.failures == 0) {
    std::cout << "PASS criterion " << number << ": " << title;
    if (!extra.empty()) std::cout << " [" << extra << "]";
    std::cout << "\n";
  } else {
    ++g_failed_criteria;
    std::cout << "FAIL criterion " << number << ": " << title << c.notes.str()
              << "\n";
  }
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::filesystem::path kCorpusPath =
    std::filesystem::path(PERPILOT_DATA_DIR) / "perinstruct.json";

// --- criterion 1: dataset reproduction ------------------------------------

void criterion_1() {
  Criterion c;
  const auto start = Clock::now();
  std::ostringstream extra;
  try {
    const auto corpus = load_corpus(kCorpusPath);
    c.expect(corpus.size() == 75, "expected 75 records");
    const auto report_values = quality_report(corpus);

    c.expect(std::abs(report_values.dlc - 0.86) <= 0.02,
             "DLC " + std::to_string(report_values.dlc) + " outside 0.86 +/- 0.02");
    c.expect(std::abs(report_values.de_difficulty - 0.98) <= 0.005,
             "DE_difficulty " + std::to_string(report_values.de_difficulty) +
                 " outside 0.98 +/- 0.005");
    c.expect(std::abs(report_values.de_diversity - 0.89) <= 0.02,
             "DE_diversity " + std::to_string(report_values.de_diversity) +
                 " outside 0.89 +/- 0.02");

    // both candidate diversity definitions, recorded side by side
    std::map<std::string, std::int64_t> occurrences, per_instruction;
    for (const auto& r : corpus) {
      std::set<std::string> seen;
      for (const auto& a : r.apps) {
        occurrences[text::normalize(a)] += 1;
        if (seen.insert(text::normalize(a)).second)
          per_instruction[text::normalize(a)] += 1;
      }
    }
    const double de_occ = distribution_entropy(occurrences);
    const double de_ins = distribution_entropy(per_instruction);
    c.expect(std::abs(de_occ - report_values.de_diversity) < 1e-12,
             "implementation should use the occurrence-count definition");
    extra << "DLC=" << report_values.dlc
          << " DE_diff=" << report_values.de_difficulty
          << " DE_div(occurrences)=" << de_occ << " DE_div(per-instruction)=" << de_ins
          << " (occurrence definition matches 0.89; the two coincide on this corpus)";

    const double elapsed = seconds_since(start);
    c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + "s >= 1s");
    extra << " " << elapsed << "s";
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report(1, "dataset metrics reproduce the published values", c, extra.str());
}

// --- criterion 2: golden-transcript equivalence ----------------------------

Instruction golden_record() {
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

void criterion_2() {
  Criterion c;
  try {
    const Instruction record = golden_record();
    Scenario scenario;
    scenario.profile = {{"my school", "test school"}, {"my friend", "jack"}};
    scenario.apps["wechat"] = {{"my friend", "jack"}};
    scenario.apps["TikTok"] = {};

    MockScript script;
    script.entries.push_back({build_perception_prompt(record.text), MatchMode::Exact,
                              "Yes|my school|my friend"});
    script.entries.push_back(
        {build_exploration_prompt(record.text, {"my friend"}, scenario.installed_apps()),
         MatchMode::Exact,
         "From the app wechat, obtain my friend name information."});
    MockBackend backend(script);

    MemoryStore store;
    store.put("my school", "test school");

    const RunTrace trace =
        run_one(record, store, scenario, backend, InterventionHook::disabled());

    c.expect(trace.perception_raw == "Yes|my school|my friend",
             "perception output was '" + trace.perception_raw + "'");
    c.expect(trace.retrieval_case == "partial",
             "retrieval case was '" + trace.retrieval_case + "'");
    c.expect(trace.remaining_after_retrieval == std::vector<std::string>{"my friend"},
             "remaining elements after retrieval differ");
    c.expect(trace.exploration_plan_raw ==
                 "From the app wechat, obtain my friend name information.",
             "exploration plan was '" + trace.exploration_plan_raw + "'");
    c.expect(trace.exploration_attempts.size() == 1 &&
                 trace.exploration_attempts[0].report_raw == "Stop|jack",
             "agent report was not 'Stop|jack'");
    c.expect(trace.final_instruction ==
                 "Open TikTok, search for a video about test school, and share it "
                 "with jack.",
             "final instruction was '" + trace.final_instruction + "'");
    c.expect(trace.success, "verdict was failure: " + trace.verdict_reason);
    c.expect(trace.sources.at("my school") == ResolutionSource::Memory &&
                 trace.sources.at("my friend") == ResolutionSource::Exploration,
             "resolution sources differ from the walkthrough");
    c.expect(store.get("my friend") == "jack" && store.get("my school") == "test school",
             "memory does not hold both entries afterwards");
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report(2, "walkthrough transcript reproduces exactly", c);
}

// --- criterion 3: self-consistency sweep -----------------------------------

void criterion_3() {
  Criterion c;
  const auto start = Clock::now();
  std::ostringstream extra;
  try {
    const auto corpus = load_corpus(kCorpusPath);
    const auto fixture = build_gold_fixture(corpus);

    MockBackend backend(fixture.script);
    MemoryStore store;
    const auto traces = run_corpus(corpus, store, fixture.scenario, backend,
                                   InterventionHook::disabled());
    const auto metrics = compute_metrics(traces, corpus);
    c.expect(metrics.overall.successes == 75 && metrics.overall.total == 75,
             "success rate was " + metrics.overall.ratio());
    c.expect(metrics.ep.rate() == 1.0, "EP accuracy was " + metrics.ep.ratio());
    c.expect(metrics.hi_count == 0,
             "HI count was " + std::to_string(metrics.hi_count));

    // same sweep, empty scenario, disabled hook
    MockBackend dry_backend(fixture.script);
    MemoryStore dry_store;
    const Scenario empty_scenario;
    const auto dry_traces = run_corpus(corpus, dry_store, empty_scenario, dry_backend,
                                       InterventionHook::disabled());
    const auto dry_metrics = compute_metrics(dry_traces, corpus);
    c.expect(dry_metrics.ex_without_hi.successes == 0,
             "Ex accuracy w/o HI was " + dry_metrics.ex_without_hi.ratio() +
                 " on an empty scenario");
    c.expect(dry_metrics.ex_without_hi.total == 65,
             "expected 65 personalized records");

    const double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s >= 10s");
    extra << "SuccessRate " << metrics.overall.ratio() << ", EP " << metrics.ep.ratio()
          << ", HI " << metrics.hi_count << ", dry Ex w/o HI "
          << dry_metrics.ex_without_hi.ratio() << ", " << elapsed << "s";
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report(3, "gold-mock sweep scores 100/100/0; empty scenario scores Ex 0", c,
         extra.str());
}

// --- criterion 4: learning curve --------------------------------------------

void criterion_4() {
  Criterion c;
  std::ostringstream extra;
  try {
    const auto corpus = load_corpus(kCorpusPath);
    const auto fixture = build_gold_fixture(corpus);
    MockBackend backend(fixture.script);

    // persistent profile between the two passes
    const auto profile_path =
        std::filesystem::temp_directory_path() / "perpilot_acceptance_profile.json";
    std::filesystem::remove(profile_path);

    MemoryStore store = MemoryStore::load(profile_path);
    const auto pass1 = run_corpus(corpus, store, fixture.scenario, backend,
                                  InterventionHook::disabled());
    store.persist(profile_path);

    MemoryStore store2 = MemoryStore::load(profile_path);
    const auto pass2 = run_corpus(corpus, store2, fixture.scenario, backend,
                                  InterventionHook::disabled());
    std::filesystem::remove(profile_path);

    const auto count_source = [](const std::vector<RunTrace>& traces,
                                 ResolutionSource wanted) {
      int n = 0;
      for (const auto& t : traces)
        for (const auto& [e, s] : t.sources) n += s == wanted ? 1 : 0;
      return n;
    };

    for (std::size_t i = 0; i < pass1.size(); ++i) {
      bool fully_resolved = true;
      for (const auto& [e, s] : pass1[i].sources) {
        if (s == ResolutionSource::Unresolved) fully_resolved = false;
      }
      if (fully_resolved && !pass2[i].exploration_attempts.empty()) {
        c.expect(false, "record " + std::to_string(pass2[i].instruction_id) +
                            " explored again on the second pass");
      }
    }
    const int mem1 = count_source(pass1, ResolutionSource::Memory);
    const int mem2 = count_source(pass2, ResolutionSource::Memory);
    c.expect(mem2 >= mem1, "memory resolutions decreased: " + std::to_string(mem1) +
                               " -> " + std::to_string(mem2));
    extra << "#Memory pass1=" << mem1 << " pass2=" << mem2 << ", explorations pass2="
          << count_source(pass2, ResolutionSource::Exploration);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report(4, "persistent memory removes second-pass exploration", c, extra.str());
}

// --- criterion 5: parser robustness -----------------------------------------

void criterion_5() {
  Criterion c;
  try {
    std::mt19937 rng(20250809);
    const std::string alphabet = "StopFINISHYesNo| \n\tmy friend school'taboo;";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len_dist(0, 60);
    const std::vector<std::string> unresolved = {"my friend", "my school"};
    const std::vector<std::string> apps = {"WeChat", "QQ"};

    for (int trial = 0; trial < 20000; ++trial) {
      std::string raw;
      const int len = len_dist(rng);
      for (int i = 0; i < len; ++i) raw.push_back(alphabet[pick(rng)]);

      const AgentReport report_value = parse_agent_report(raw);  // total
      if (report_value.finished && report_value.info.empty()) {
        c.expect(false, "finished report with empty info for: " + raw);
        break;
      }

      try {
        const auto perception = parse_perception(raw);
        if (perception.is_personalized && perception.elements.empty()) {
          c.expect(false, "personalized verdict with no elements for: " + raw);
          break;
        }
      } catch (const GrammarError&) {
      }

      try {
        const auto plan = parse_exploration_plan(raw, unresolved, apps);
        if (plan.size() != unresolved.size()) {
          c.expect(false, "plan length mismatch without error for: " + raw);
          break;
        }
      } catch (const PlanError&) {
      }
    }
  } catch (const std::exception& e) {
    c.expect(false, std::string("unexpected exception: ") + e.what());
  }
  report(5, "parsers are total/strict under 20000 fuzzed inputs", c);
}

// --- criterion 6: three-case totality ----------------------------------------

void criterion_6() {
  Criterion c;
  try {
    const std::string instruction = "Bring alpha then beta then gamma.";
    const std::vector<std::string> elements = {"alpha", "beta", "gamma"};
    for (int mask = 0; mask < 8; ++mask) {
      MemoryStore store;
      int held = 0;
      for (int i = 0; i < 3; ++i) {
        if (mask & (1 << i)) {
          store.put(elements[i], "value" + std::to_string(i));
          ++held;
        }
      }
      const auto outcome = retrieve_complete(instruction, elements, store);
      int matched = 0;
      matched += outcome.kind == RetrievalOutcome::Kind::Completed ? 1 : 0;
      matched += outcome.kind == RetrievalOutcome::Kind::Partial ? 1 : 0;
      matched += outcome.kind == RetrievalOutcome::Kind::Missing ? 1 : 0;
      c.expect(matched == 1, "subset " + std::to_string(mask) +
                                 ": outcome kinds are not exclusive");
      const RetrievalOutcome::Kind expected =
          held == 3   ? RetrievalOutcome::Kind::Completed
          : held == 0 ? RetrievalOutcome::Kind::Missing
                      : RetrievalOutcome::Kind::Partial;
      c.expect(outcome.kind == expected,
               "subset " + std::to_string(mask) + ": wrong case for " +
                   std::to_string(held) + " held elements");
      c.expect(outcome.remaining_elements.size() == std::size_t(3 - held),
               "subset " + std::to_string(mask) + ": wrong remaining count");
    }
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  report(6, "retrieval case analysis is total and exclusive over all subsets", c);
}

// --- criterion 7: desk-scale statement ----------------------------------------

void criterion_7() {
  // The published device-level success rates (68.0%/49.3%/46.7% overall) and
  // model accuracies (o4-mini 86.7%, fine-tuned 74.7%) need real handsets and
  // specific hosted models, so this harness does NOT reproduce them. Criteria
  // 2-6 substitute deterministic desk-scale checks; the HTTP backend lets
  // users with credentials rerun perception against a live model and compare
  // qualitatively (see README).
  Criterion c;
  c.expect(true, "");
  report(7,
         "device-scale success rates are out of desk scope by construction; "
         "criteria 2-6 substitute, HTTP backend provided for live comparison",
         c);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (g_failed_criteria > 0) {
    std::cout << g_failed_criteria << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
