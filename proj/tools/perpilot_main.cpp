// Command-line front end: dataset validation and quality metrics, pipeline
// runs against a scenario, trace evaluation, and memory inspection. Every
// number printed here comes from the library; the CLI only formats.
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "perpilot/dataset.hpp"
#include "perpilot/errors.hpp"
#include "perpilot/evaluation.hpp"
#include "perpilot/fixtures.hpp"
#include "perpilot/llm_backend.hpp"
#include "perpilot/memory.hpp"
#include "perpilot/orchestrator.hpp"
#include "perpilot/sim_env.hpp"
#include "perpilot/text.hpp"

namespace {

// Exit codes, also documented in the README:
//   0 success, 2 usage error, 3 missing file, 4 parse/format error,
//   5 validation failure, 6 backend/network error, 7 internal error.
enum ExitCode {
  kOk = 0,
  kUsage = 2,
  kMissingFile = 3,
  kParse = 4,
  kValidation = 5,
  kBackend = 6,
  kInternal = 7,
};

int require_file(const std::string& path, const char* what) {
  if (!std::filesystem::exists(path)) {
    std::cerr << "error: " << what << " not found: " << path << "\n";
    return kMissingFile;
  }
  return kOk;
}

int cmd_dataset_check(const std::string& corpus_path) {
  if (int rc = require_file(corpus_path, "corpus"); rc != kOk) return rc;
  const auto corpus = perpilot::load_corpus(corpus_path);
  std::set<std::string> apps;
  std::map<perpilot::Difficulty, int> counts;
  int personalized = 0;
  for (const auto& r : corpus) {
    counts[r.difficulty] += 1;
    personalized += r.personalized() ? 1 : 0;
    for (const auto& a : r.apps) apps.insert(perpilot::text::normalize(a));
  }
  std::cout << "corpus OK: " << corpus.size() << " records, " << apps.size()
            << " distinct apps, " << personalized << " personalized\n";
  std::cout << "difficulty: simple " << counts[perpilot::Difficulty::Simple]
            << ", normal " << counts[perpilot::Difficulty::Normal] << ", hard "
            << counts[perpilot::Difficulty::Hard] << "\n";
  return kOk;
}

int cmd_dataset_metrics(const std::string& corpus_path, const std::string& format) {
  if (int rc = require_file(corpus_path, "corpus"); rc != kOk) return rc;
  const auto corpus = perpilot::load_corpus(corpus_path);
  const auto report = perpilot::quality_report(corpus);
  if (format == "json") {
    std::ostringstream os;
    os << std::setprecision(10) << "{\n"
       << "  \"dlc\": " << report.dlc << ",\n"
       << "  \"de_difficulty\": " << report.de_difficulty << ",\n"
       << "  \"de_diversity\": " << report.de_diversity << ",\n"
       << "  \"counts\": {\"simple\": "
       << report.counts_by_difficulty.at(perpilot::Difficulty::Simple)
       << ", \"normal\": "
       << report.counts_by_difficulty.at(perpilot::Difficulty::Normal)
       << ", \"hard\": "
       << report.counts_by_difficulty.at(perpilot::Difficulty::Hard) << "}\n"
       << "}\n";
    std::cout << os.str();
    return kOk;
  }
  std::cout << std::left << std::setw(22) << "Category" << std::setw(18)
            << "Metric" << "Value\n";
  std::cout << std::string(46, '-') << "\n";
  std::cout << std::fixed << std::setprecision(2);
  std::cout << std::left << std::setw(22) << "Quantitative Metrics"
            << std::setw(18) << "DLC" << report.dlc << "\n";
  std::cout << std::left << std::setw(22) << "" << std::setw(18)
            << "DE_difficulty" << report.de_difficulty << "\n";
  std::cout << std::left << std::setw(22) << "" << std::setw(18)
            << "DE_diversity" << report.de_diversity << "\n";
  std::cout << std::left << std::setw(22) << "Counts" << std::setw(18) << "Simple"
            << report.counts_by_difficulty.at(perpilot::Difficulty::Simple) << "\n";
  std::cout << std::left << std::setw(22) << "" << std::setw(18) << "Normal"
            << report.counts_by_difficulty.at(perpilot::Difficulty::Normal) << "\n";
  std::cout << std::left << std::setw(22) << "" << std::setw(18) << "Hard"
            << report.counts_by_difficulty.at(perpilot::Difficulty::Hard) << "\n";
  return kOk;
}

struct RunArgs {
  std::string corpus;
  std::string scenario;
  std::string memory;
  std::string backend = "mock";
  std::string script;
  std::string traces;
  std::string interventions;
  bool interactive = false;
  bool no_interventions = false;
  bool fail_fast = false;
  bool lenient_mock = false;
  std::string profile;
  bool quiet = false;
  perpilot::LlmConfig llm;
};

int cmd_run(const RunArgs& args) {
  if (int rc = require_file(args.corpus, "corpus"); rc != kOk) return rc;
  if (int rc = require_file(args.scenario, "scenario"); rc != kOk) return rc;

  const auto corpus = perpilot::load_corpus(args.corpus);
  const auto scenario = perpilot::Scenario::load(args.scenario);

  std::unique_ptr<perpilot::LlmBackend> backend;
  if (args.backend == "mock") {
    if (int rc = require_file(args.script, "mock script"); rc != kOk) return rc;
    backend = std::make_unique<perpilot::MockBackend>(
        perpilot::MockScript::load(args.script), !args.lenient_mock);
  } else {
    perpilot::LlmConfig config = args.llm;
    if (config.endpoint.empty()) {
      std::cerr << "error: --backend http requires --endpoint\n";
      return kUsage;
    }
    if (config.api_key.empty() && std::getenv("PERPILOT_API_KEY") == nullptr) {
      std::cerr << "error: --backend http requires an API key "
                   "(--api-key or $PERPILOT_API_KEY)\n";
      return kUsage;
    }
    backend = std::make_unique<perpilot::HttpBackend>(config);
  }

  perpilot::MemoryStore store;
  if (!args.memory.empty()) store = perpilot::MemoryStore::load(args.memory);
  if (!args.profile.empty()) store.set_profile_id(args.profile);

  perpilot::InterventionHook hook = perpilot::InterventionHook::disabled();
  if (args.interactive) {
    hook = perpilot::InterventionHook::interactive(std::cin, std::cout);
  } else if (!args.interventions.empty()) {
    if (int rc = require_file(args.interventions, "interventions file"); rc != kOk)
      return rc;
    const auto script_store = perpilot::MemoryStore::load(args.interventions);
    std::map<std::string, std::string> values(script_store.entries().begin(),
                                              script_store.entries().end());
    hook = perpilot::InterventionHook::scripted(std::move(values));
  }

  perpilot::RunOptions options;
  options.fail_fast = args.fail_fast;
  if (!args.quiet) {
    options.on_trace = [](const perpilot::RunTrace& t) {
      std::cout << "  #" << t.instruction_id << "  "
                << (t.success ? "ok  " : "FAIL") << "  " << t.final_instruction
                << "\n";
    };
  }

  const auto traces =
      perpilot::run_corpus(corpus, store, scenario, *backend, hook, options);

  if (!args.traces.empty()) {
    perpilot::save_traces(traces, args.traces);
    std::cout << "traces written to " << args.traces << "\n";
  }
  if (!args.memory.empty()) {
    store.persist(args.memory);
    std::cout << "memory persisted to " << args.memory << " (" << store.size()
              << " entries)\n";
  }

  const auto report = perpilot::compute_metrics(traces, corpus);
  std::cout << "\n" << perpilot::render_report(report, perpilot::ReportFormat::PlainTable);
  return kOk;
}

int cmd_eval(const std::string& traces_path, const std::string& corpus_path,
             const std::string& format) {
  if (int rc = require_file(traces_path, "trace file"); rc != kOk) return rc;
  if (int rc = require_file(corpus_path, "corpus"); rc != kOk) return rc;
  const auto traces = perpilot::load_traces(traces_path);
  const auto corpus = perpilot::load_corpus(corpus_path);
  const auto report = perpilot::compute_metrics(traces, corpus);
  std::cout << perpilot::render_report(report, format == "json"
                                                   ? perpilot::ReportFormat::Json
                                                   : perpilot::ReportFormat::PlainTable);
  return kOk;
}

int cmd_memory_show(const std::string& memory_path) {
  const auto store = perpilot::MemoryStore::load(memory_path);
  std::cout << "profile: " << store.profile_id() << " (" << store.size()
            << " entries)\n";
  for (const auto& [key, value] : store.entries()) {
    std::cout << "  " << key << " -> " << value << "\n";
  }
  return kOk;
}

int cmd_memory_clear(const std::string& memory_path) {
  auto store = perpilot::MemoryStore::load(memory_path);
  const auto n = store.size();
  store.clear();
  store.persist(memory_path);
  std::cout << "cleared " << n << " entries from " << memory_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized-instruction pipeline and benchmark harness"};
  app.require_subcommand(1);

  // dataset check | dataset metrics
  auto* dataset = app.add_subcommand("dataset", "corpus validation and quality metrics");
  dataset->require_subcommand(1);
  std::string corpus_path;
  auto* check = dataset->add_subcommand("check", "validate a corpus file");
  check->add_option("path", corpus_path, "corpus file")->required();
  std::string metrics_format = "table";
  auto* metrics = dataset->add_subcommand("metrics", "DLC and DE quality metrics");
  metrics->add_option("path", corpus_path, "corpus file")->required();
  metrics->add_option("--format", metrics_format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  // run
  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run the pipeline over a corpus");
  run->add_option("--corpus", run_args.corpus, "corpus file")->required();
  run->add_option("--scenario", run_args.scenario, "scenario file")->required();
  run->add_option("--memory", run_args.memory, "memory profile file (loaded and persisted)");
  run->add_option("--backend", run_args.backend, "mock|http")
      ->check(CLI::IsMember({"mock", "http"}));
  run->add_option("--script", run_args.script, "mock script file (backend=mock)");
  run->add_flag("--lenient-mock", run_args.lenient_mock,
                "unmatched prompts fall back to the script's default response");
  run->add_option("--traces", run_args.traces, "write per-instruction traces (JSONL)");
  auto* iv = run->add_option("--interventions", run_args.interventions,
                             "scripted element->value answers (JSON map file)");
  auto* ia = run->add_flag("--interactive", run_args.interactive,
                           "ask on stdin when exploration fails");
  auto* ni = run->add_flag("--no-interventions", run_args.no_interventions,
                           "never ask (default)");
  iv->excludes(ia)->excludes(ni);
  ia->excludes(ni);
  run->add_flag("--fail-fast", run_args.fail_fast, "stop after the first stage error");
  run->add_option("--profile", run_args.profile, "memory profile id");
  run->add_flag("--quiet", run_args.quiet, "suppress per-instruction lines");
  run->add_option("--model", run_args.llm.model_name, "model name (backend=http)");
  run->add_option("--endpoint", run_args.llm.endpoint,
                  "chat-completion base URL (backend=http)");
  run->add_option("--api-key", run_args.llm.api_key,
                  "API key (default: $PERPILOT_API_KEY)");
  run->add_option("--temperature", run_args.llm.temperature, "sampling temperature");
  run->add_option("--max-tokens", run_args.llm.max_tokens, "completion token limit");
  run->add_option("--seed", run_args.llm.seed, "sampling seed");

  // eval
  std::string traces_path, eval_corpus, eval_format = "table";
  auto* eval = app.add_subcommand("eval", "compute metrics from saved traces");
  eval->add_option("--traces", traces_path, "trace file (JSONL)")->required();
  eval->add_option("--corpus", eval_corpus, "corpus file")->required();
  eval->add_option("--format", eval_format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  // memory show | memory clear
  auto* memory = app.add_subcommand("memory", "inspect or clear a memory profile");
  memory->require_subcommand(1);
  std::string memory_path;
  auto* show = memory->add_subcommand("show", "print profile entries");
  show->add_option("--memory", memory_path, "memory file")->required();
  auto* clear = memory->add_subcommand("clear", "drop all entries");
  clear->add_option("--memory", memory_path, "memory file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (check->parsed()) return cmd_dataset_check(corpus_path);
    if (metrics->parsed()) return cmd_dataset_metrics(corpus_path, metrics_format);
    if (run->parsed()) return cmd_run(run_args);
    if (eval->parsed()) return cmd_eval(traces_path, eval_corpus, eval_format);
    if (show->parsed()) return cmd_memory_show(memory_path);
    if (clear->parsed()) return cmd_memory_clear(memory_path);
  } catch (const perpilot::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const perpilot::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kBackend;
  } catch (const perpilot::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
