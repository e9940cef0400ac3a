#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perpilot {

enum class Difficulty { Simple, Normal, Hard };

std::string_view to_string(Difficulty d);

// Accepts the internal spellings (simple/normal/hard) as well as the corpus
// file spellings (easy/normal/difficult), case-insensitively.
std::optional<Difficulty> parse_difficulty(std::string_view s);

struct Instruction {
  int id = 0;
  std::string text;
  Difficulty difficulty = Difficulty::Simple;
  int min_steps = 1;
  std::vector<std::string> apps;
  std::string completed_template;
  std::vector<std::string> gold_elements;  // may be empty: element is implicit
  std::vector<std::string> info_types;     // one per placeholder, in order

  bool personalized() const { return !gold_elements.empty(); }
};

bool operator==(const Instruction& a, const Instruction& b);

// One placeholder of a completed template, aligned against the raw text.
// `phrase` is the exact span of the raw text the placeholder covers,
// starting at byte `offset`; `personalized` says whether that span is one
// of the gold elements.
struct SlotBinding {
  std::string info_type;
  std::string phrase;
  std::size_t offset = 0;
  bool personalized = false;
};

// Aligns completed_template against text by matching the literal chunks
// between placeholders. Throws ValidationError when the record is
// inconsistent (literal not found, empty span, placeholder/info_types
// mismatch, or gold_elements not equal to the distinct personalized spans).
std::vector<SlotBinding> bind_slots(const Instruction& record);

std::vector<Instruction> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::vector<Instruction>& corpus,
                 const std::filesystem::path& path);

// Tie-corrected Spearman rank correlation between the difficulty ordinal
// (Simple=1, Normal=2, Hard=3) and min_steps: average ranks on both sides,
// then Pearson correlation of the ranks.
double spearman_dlc(const std::vector<Instruction>& corpus);

// Normalized Shannon entropy H/ln(K) over the supplied categories.
// K counts every supplied category, including zero-count ones.
double distribution_entropy(const std::map<std::string, std::int64_t>& counts);

struct DatasetQualityReport {
  double dlc = 0.0;
  double de_difficulty = 0.0;
  double de_diversity = 0.0;
  std::map<Difficulty, int> counts_by_difficulty;
};

// DE over difficulty uses the fixed three-level taxonomy (absent levels count
// as zero); DE over apps counts one occurrence per app listed per instruction.
DatasetQualityReport quality_report(const std::vector<Instruction>& corpus);

}  // namespace perpilot
