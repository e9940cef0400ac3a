#include "perpilot/memory.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

using nlohmann::json;
using nlohmann::ordered_json;

MemoryStore MemoryStore::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    // "Initially, the database is empty."
    MemoryStore store;
    store.profile_id_ = path.stem().string().empty() ? "default" : path.stem().string();
    return store;
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open memory file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("memory file " + path.string() + ": " + e.what());
  }
  MemoryStore store;
  try {
    store.profile_id_ = doc.at("profile").get<std::string>();
    for (const auto& [key, value] : doc.at("entries").items()) {
      if (text::trim(key).empty() || !value.is_string() ||
          value.get<std::string>().empty()) {
        throw ParseError("memory file " + path.string() +
                         ": entry with empty key or value");
      }
      store.entries_[text::normalize(key)] = value.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError("memory file " + path.string() + ": " + e.what());
  }
  return store;
}

void MemoryStore::persist(const std::filesystem::path& path) const {
  ordered_json doc;
  doc["profile"] = profile_id_;
  doc["entries"] = ordered_json::object();
  for (const auto& [key, value] : entries_) doc["entries"][key] = value;

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ParseError("cannot write memory file: " + tmp.string());
    out << doc.dump(2) << "\n";
    if (!out.good()) throw ParseError("failed writing memory file: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
  dirty_ = false;
}

void MemoryStore::put(std::string_view element, std::string_view value) {
  const std::string key = text::normalize(element);
  if (key.empty()) throw ValidationError("memory key must be non-empty");
  if (std::string(value).empty()) throw ValidationError("memory value must be non-empty");
  entries_[key] = std::string(value);
  dirty_ = true;
}

std::optional<std::string> MemoryStore::get(std::string_view element) const {
  const auto it = entries_.find(text::normalize(element));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void MemoryStore::clear() {
  if (!entries_.empty()) dirty_ = true;
  entries_.clear();
}

std::string_view to_string(RetrievalOutcome::Kind kind) {
  switch (kind) {
    case RetrievalOutcome::Kind::Completed: return "completed";
    case RetrievalOutcome::Kind::Partial: return "partial";
    case RetrievalOutcome::Kind::Missing: return "missing";
  }
  return "missing";
}

RetrievalOutcome retrieve_complete(const std::string& instruction_text,
                                   const std::vector<std::string>& elements,
                                   const MemoryStore& store) {
  if (elements.empty()) throw ValidationError("retrieval requires at least one element");
  {
    std::set<std::string> uniq;
    for (const auto& e : elements) {
      if (!uniq.insert(text::normalize(e)).second) {
        throw ValidationError("duplicate element in retrieval request: " + e);
      }
    }
  }

  struct Found {
    std::string phrase;
    std::string value;
  };
  std::vector<Found> found;
  std::vector<std::string> remaining;
  for (const auto& e : elements) {
    if (auto value = store.get(e)) {
      if (!text::icontains(instruction_text, e)) {
        throw SubstitutionError("element phrase does not occur in the instruction: '" +
                                    e + "'",
                                e);
      }
      found.push_back({e, *value});
    } else {
      remaining.push_back(e);
    }
  }

  RetrievalOutcome outcome;
  if (found.empty()) {
    outcome.kind = RetrievalOutcome::Kind::Missing;
    outcome.instruction_text = instruction_text;
    outcome.remaining_elements = remaining;
    return outcome;
  }

  // Longest phrase first so "my friend" is never clobbered by "friend";
  // one left-to-right pass, emitted values are never rescanned.
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    if (a.phrase.size() != b.phrase.size()) return a.phrase.size() > b.phrase.size();
    return a.phrase < b.phrase;
  });
  std::string out;
  out.reserve(instruction_text.size());
  std::size_t i = 0;
  while (i < instruction_text.size()) {
    const Found* hit = nullptr;
    for (const auto& f : found) {
      if (i + f.phrase.size() <= instruction_text.size() &&
          text::iequals({instruction_text.data() + i, f.phrase.size()}, f.phrase)) {
        hit = &f;
        break;
      }
    }
    if (hit) {
      out += hit->value;
      i += hit->phrase.size();
    } else {
      out.push_back(instruction_text[i]);
      ++i;
    }
  }

  outcome.instruction_text = std::move(out);
  outcome.remaining_elements = remaining;
  outcome.kind = remaining.empty() ? RetrievalOutcome::Kind::Completed
                                   : RetrievalOutcome::Kind::Partial;
  return outcome;
}

}  // namespace perpilot
