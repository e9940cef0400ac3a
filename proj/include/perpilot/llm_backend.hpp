#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace perpilot {

struct LlmConfig {
  std::string model_name = "o4-mini";
  double temperature = 0.0;
  int max_tokens = 4096;
  int seed = 1234;
  std::string endpoint;  // base URL, e.g. https://api.openai.com/v1
  std::string api_key;   // falls back to $PERPILOT_API_KEY when empty

  void validate() const;  // throws ValidationError
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;

  // One single-turn completion. Throws ValidationError on an empty prompt,
  // BackendError on transport/model failure or empty model output.
  virtual std::string complete(const std::string& prompt) = 0;

  std::size_t calls() const { return calls_.load(); }

 protected:
  void count_call() { calls_.fetch_add(1); }

 private:
  std::atomic<std::size_t> calls_{0};
};

enum class MatchMode { Substring, Exact };

struct MockEntry {
  std::string matcher;
  MatchMode mode = MatchMode::Substring;
  std::string response;
};

struct MockScript {
  std::vector<MockEntry> entries;
  std::optional<std::string> default_response;  // lenient-mode fallback

  static MockScript load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

// Deterministic scripted backend. Lookup never mutates the script, so
// replaying a transcript yields identical traces. First matching entry wins.
class MockBackend : public LlmBackend {
 public:
  explicit MockBackend(MockScript script, bool strict = true);

  std::string complete(const std::string& prompt) override;

 private:
  MockScript script_;
  bool strict_;
};

// OpenAI-compatible chat-completion client: POST <endpoint>/chat/completions
// with model, messages, temperature, max_tokens, seed. Retries transport
// failures (connection errors, 5xx) up to twice; malformed responses are not
// retried.
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(LlmConfig config);

  std::string complete(const std::string& prompt) override;

 private:
  LlmConfig config_;
  std::string host_;  // scheme://host:port
  std::string base_path_;
};

}  // namespace perpilot
