#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perpilot {

// The per-profile element -> value database. Keys are stored normalized
// (lowercase, trimmed, collapsed whitespace); latest write wins. One run
// owns its store exclusively; persistence is atomic (write-temp-then-rename).
class MemoryStore {
 public:
  MemoryStore() = default;
  explicit MemoryStore(std::string profile_id) : profile_id_(std::move(profile_id)) {}

  // Missing file yields an empty store named after the file stem.
  static MemoryStore load(const std::filesystem::path& path);
  void persist(const std::filesystem::path& path) const;

  void put(std::string_view element, std::string_view value);  // throws ValidationError
  std::optional<std::string> get(std::string_view element) const;
  bool contains(std::string_view element) const { return get(element).has_value(); }
  void clear();

  const std::map<std::string, std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const std::string& profile_id() const { return profile_id_; }
  void set_profile_id(std::string id) { profile_id_ = std::move(id); }
  bool dirty() const { return dirty_; }

 private:
  std::string profile_id_ = "default";
  std::map<std::string, std::string> entries_;
  mutable bool dirty_ = false;
};

struct RetrievalOutcome {
  enum class Kind { Completed, Partial, Missing };

  Kind kind = Kind::Missing;
  // Completed: fully substituted text. Partial: partially substituted text.
  // Missing: the input text, untouched.
  std::string instruction_text;
  // Partial: the unresolved subset, in input order. Missing: all elements.
  // Completed: empty.
  std::vector<std::string> remaining_elements;
};

std::string_view to_string(RetrievalOutcome::Kind kind);

// Substitutes the stored value for every occurrence of each element found in
// the store (case-insensitive, longest-phrase-first, single left-to-right
// pass; emitted values are never rescanned). Exactly one outcome kind holds:
// all found -> Completed, none -> Missing, otherwise Partial.
// Throws ValidationError when elements is empty or has duplicates, and
// SubstitutionError when a stored element's phrase does not occur in the text.
RetrievalOutcome retrieve_complete(const std::string& instruction_text,
                                   const std::vector<std::string>& elements,
                                   const MemoryStore& store);

}  // namespace perpilot
