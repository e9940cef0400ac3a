#include "perpilot/perception.hpp"

#include <algorithm>

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

namespace {

constexpr const char* kPerceptionPrompt =
    R"(Please understand and evaluate the instructions I have given you to determine if they contain personalized elements.
If the instruction contains words that need to be clarified by asking the user, or if certain words have different meanings for different people or devices, it can be determined that the instruction contains personalized elements, and these words are personalized elements.

You need to strictly follow the following rules:

Rule 1: If certain words have unique executable meanings, such as app names like QQ and WeChat, they are not personalized elements.

Rule 2: When you think something is not a personalized element, directly determine that it is not a personalized element.

Rule 3: Strictly prohibit treating specific names as personalized elements, whether they are Chinese or English names. But abstract names are still personalized elements, such as friends.

If you think it is not a personalized instruction, please answer 'No'.

If you think this is a personalized instruction, you need to determine which part of the instruction is the personalized element.

Then your answer should follow this format:
'Yes|First personalized element (i.e., the first part you consider personalized)|Second personalized element|Third personalized element (and so on, output all personalized elements,The same element only needs to be output once)'
The current instruction is as follows:{instruction}

Please note that your answer should not include any additional information outside the format provided.)";

}  // namespace

bool operator==(const PerceptionResult& a, const PerceptionResult& b) {
  return a.is_personalized == b.is_personalized && a.elements == b.elements;
}

std::string build_perception_prompt(const std::string& instruction_text) {
  if (text::trim(instruction_text).empty()) {
    throw ValidationError("empty instruction text");
  }
  return text::fill_template(kPerceptionPrompt, {{"instruction", instruction_text}});
}

PerceptionResult parse_perception(const std::string& raw) {
  const std::string t = text::trim(raw);
  if (text::iequals(t, "no")) return {};

  const std::vector<std::string> segments = text::split(t, '|');
  if (!text::iequals(text::trim(segments.front()), "yes")) {
    throw GrammarError("perception output matches neither 'No' nor 'Yes|...'", raw);
  }

  PerceptionResult result;
  result.is_personalized = true;
  std::vector<std::string> seen;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const std::string phrase = text::trim(segments[i]);
    if (phrase.empty()) continue;
    const std::string n = text::normalize(phrase);
    if (std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
    seen.push_back(n);
    result.elements.push_back(phrase);
  }
  if (result.elements.empty()) {
    throw GrammarError("'Yes' verdict carries no elements", raw);
  }
  return result;
}

std::string serialize_perception(const PerceptionResult& result) {
  if (!result.is_personalized) return "No";
  std::string out = "Yes";
  for (const auto& e : result.elements) out += "|" + e;
  return out;
}

PerceptionResult perceive(const std::string& instruction_text, LlmBackend& backend) {
  return parse_perception(backend.complete(build_perception_prompt(instruction_text)));
}

}  // namespace perpilot
