#pragma once

#include <string>
#include <vector>

#include "perpilot/llm_backend.hpp"

namespace perpilot {

struct PerceptionResult {
  bool is_personalized = false;
  // Trimmed, order-preserving, deduplicated under normalization. Empty when
  // is_personalized is false.
  std::vector<std::string> elements;
};

bool operator==(const PerceptionResult& a, const PerceptionResult& b);

std::string build_perception_prompt(const std::string& instruction_text);

// Accepts "No" (case-insensitive, surrounding whitespace ignored) or
// "Yes|elem|elem|...". Anything else throws GrammarError. Never returns
// is_personalized=true with an empty element list.
PerceptionResult parse_perception(const std::string& raw);

// "No" or "Yes|a|b|..." — the inverse of parse_perception.
std::string serialize_perception(const PerceptionResult& result);

PerceptionResult perceive(const std::string& instruction_text,
                          LlmBackend& backend);

}  // namespace perpilot
