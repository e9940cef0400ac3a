#include "perpilot/llm_backend.hpp"

#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "json.hpp"

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

using nlohmann::json;
using nlohmann::ordered_json;

void LlmConfig::validate() const {
  if (temperature < 0.0) throw ValidationError("temperature must be >= 0");
  if (max_tokens < 1) throw ValidationError("max_tokens must be >= 1");
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mock script: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("mock script " + path.string() + ": " + e.what());
  }
  MockScript script;
  try {
    if (doc.contains("default_response") && !doc["default_response"].is_null()) {
      script.default_response = doc["default_response"].get<std::string>();
    }
    for (const auto& e : doc.at("entries")) {
      MockEntry entry;
      entry.matcher = e.at("match").get<std::string>();
      const std::string mode = e.value("mode", "substring");
      if (mode == "exact") {
        entry.mode = MatchMode::Exact;
      } else if (mode == "substring") {
        entry.mode = MatchMode::Substring;
      } else {
        throw ParseError("mock script " + path.string() + ": unknown mode '" + mode + "'");
      }
      entry.response = e.at("response").get<std::string>();
      script.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ParseError("mock script " + path.string() + ": " + e.what());
  }
  return script;
}

void MockScript::save(const std::filesystem::path& path) const {
  ordered_json doc;
  doc["default_response"] = default_response ? ordered_json(*default_response)
                                             : ordered_json(nullptr);
  doc["entries"] = ordered_json::array();
  for (const auto& e : entries) {
    doc["entries"].push_back(
        ordered_json{{"match", e.matcher},
                     {"mode", e.mode == MatchMode::Exact ? "exact" : "substring"},
                     {"response", e.response}});
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write mock script: " + path.string());
  out << doc.dump(2) << "\n";
}

MockBackend::MockBackend(MockScript script, bool strict)
    : script_(std::move(script)), strict_(strict) {}

std::string MockBackend::complete(const std::string& prompt) {
  if (text::trim(prompt).empty()) throw ValidationError("empty prompt");
  count_call();
  for (const auto& entry : script_.entries) {
    const bool hit = entry.mode == MatchMode::Exact
                         ? prompt == entry.matcher
                         : prompt.find(entry.matcher) != std::string::npos;
    if (hit) {
      if (entry.response.empty()) throw BackendError("empty model output");
      return entry.response;
    }
  }
  if (!strict_ && script_.default_response) {
    if (script_.default_response->empty()) throw BackendError("empty model output");
    return *script_.default_response;
  }
  const std::string prefix = prompt.substr(0, std::min<std::size_t>(prompt.size(), 80));
  throw BackendError("no script entry matches prompt: " + prefix + "...");
}

namespace {

// scheme://host[:port][/base/path] -> (scheme://host:port, /base/path)
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ValidationError("endpoint must include a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, ""};
  std::string base = endpoint.substr(path_start);
  while (!base.empty() && base.back() == '/') base.pop_back();
  return {endpoint.substr(0, path_start), base};
}

}  // namespace

HttpBackend::HttpBackend(LlmConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.endpoint.empty()) throw ValidationError("http backend requires an endpoint");
  if (config_.api_key.empty()) {
    if (const char* env = std::getenv("PERPILOT_API_KEY")) config_.api_key = env;
  }
  std::tie(host_, base_path_) = split_endpoint(config_.endpoint);
}

std::string HttpBackend::complete(const std::string& prompt) {
  if (text::trim(prompt).empty()) throw ValidationError("empty prompt");
  count_call();

  const ordered_json body = {
      {"model", config_.model_name},
      {"messages", ordered_json::array({ordered_json{{"role", "user"}, {"content", prompt}}})},
      {"temperature", config_.temperature},
      {"max_tokens", config_.max_tokens},
      {"seed", config_.seed},
  };
  const std::string payload = body.dump();
  const std::string path = base_path_ + "/chat/completions";

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  std::string last_error;
  constexpr int kMaxAttempts = 3;  // first try + 2 retries on transport errors
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    httplib::Client client(host_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error: HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("chat completion failed: HTTP " + std::to_string(res->status) +
                         " " + res->body.substr(0, 200));
    }
    json doc;
    try {
      doc = json::parse(res->body);
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed completion response: ") + e.what());
    }
    std::string content;
    try {
      content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
      throw BackendError("completion response has no choices[0].message.content");
    }
    if (content.empty()) throw BackendError("empty model output");
    return content;
  }
  throw BackendError("chat completion failed after " + std::to_string(kMaxAttempts) +
                     " attempts: " + last_error);
}

}  // namespace perpilot
