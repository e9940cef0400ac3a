#include "perpilot/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "perpilot/errors.hpp"
#include "perpilot/text.hpp"

namespace perpilot {

using nlohmann::ordered_json;

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Simple: return "simple";
    case Difficulty::Normal: return "normal";
    case Difficulty::Hard: return "hard";
  }
  return "simple";
}

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  const std::string n = text::normalize(s);
  if (n == "simple" || n == "easy") return Difficulty::Simple;
  if (n == "normal") return Difficulty::Normal;
  if (n == "hard" || n == "difficult") return Difficulty::Hard;
  return std::nullopt;
}

bool operator==(const Instruction& a, const Instruction& b) {
  return a.id == b.id && a.text == b.text && a.difficulty == b.difficulty &&
         a.min_steps == b.min_steps && a.apps == b.apps &&
         a.completed_template == b.completed_template &&
         a.gold_elements == b.gold_elements && a.info_types == b.info_types;
}

namespace {

struct TemplateParts {
  std::vector<std::string> literals;  // literals.size() == types.size() + 1
  std::vector<std::string> types;
};

TemplateParts split_template(const std::string& tmpl) {
  TemplateParts parts;
  std::string literal;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t close = tmpl.find('}', i + 1);
      if (close == std::string::npos) {
        throw ValidationError("unterminated placeholder in template: " + tmpl);
      }
      parts.literals.push_back(literal);
      literal.clear();
      parts.types.push_back(tmpl.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      literal.push_back(tmpl[i]);
      ++i;
    }
  }
  parts.literals.push_back(literal);
  return parts;
}

[[noreturn]] void record_error(const Instruction& r, const std::string& field,
                               const std::string& why) {
  std::ostringstream os;
  os << "record id " << r.id << ", field '" << field << "': " << why;
  throw ValidationError(os.str());
}

}  // namespace

std::vector<SlotBinding> bind_slots(const Instruction& record) {
  const TemplateParts parts = split_template(record.completed_template);

  if (parts.types.size() != record.info_types.size()) {
    record_error(record, "info_types",
                 "template has " + std::to_string(parts.types.size()) +
                     " placeholders but info_types lists " +
                     std::to_string(record.info_types.size()));
  }
  for (std::size_t i = 0; i < parts.types.size(); ++i) {
    if (text::normalize(parts.types[i]) != text::normalize(record.info_types[i])) {
      record_error(record, "info_types",
                   "placeholder " + std::to_string(i + 1) + " is {" +
                       parts.types[i] + "} but info_types says '" +
                       record.info_types[i] + "'");
    }
  }

  // Align template literals against the raw text; the gaps are the slots.
  const std::string& t = record.text;
  if (t.compare(0, parts.literals.front().size(), parts.literals.front()) != 0) {
    record_error(record, "completed_template",
                 "leading literal does not match the instruction text");
  }
  std::size_t pos = parts.literals.front().size();
  std::vector<SlotBinding> slots;
  for (std::size_t i = 1; i < parts.literals.size(); ++i) {
    const std::string& lit = parts.literals[i];
    std::size_t end;
    if (lit.empty()) {
      if (i != parts.literals.size() - 1) {
        record_error(record, "completed_template", "adjacent placeholders");
      }
      end = t.size();
    } else {
      end = t.find(lit, pos);
      if (end == std::string::npos) {
        record_error(record, "completed_template",
                     "literal '" + lit + "' not found in the instruction text");
      }
    }
    SlotBinding slot;
    slot.info_type = parts.types[i - 1];
    slot.phrase = t.substr(pos, end - pos);
    slot.offset = pos;
    if (text::trim(slot.phrase).empty()) {
      record_error(record, "completed_template",
                   "placeholder " + std::to_string(i) + " covers an empty span");
    }
    slots.push_back(std::move(slot));
    pos = end + lit.size();
  }
  if (pos != t.size()) {
    record_error(record, "completed_template",
                 "instruction text has trailing content the template does not cover");
  }

  // Every gold element must be one of the covered spans, listed in
  // first-occurrence order and without duplicates. Spans that are not gold
  // elements are explicit values the user already spelled out.
  std::vector<std::string> distinct;
  for (const auto& slot : slots) {
    const std::string n = text::normalize(slot.phrase);
    if (std::none_of(distinct.begin(), distinct.end(),
                     [&](const std::string& d) { return d == n; })) {
      distinct.push_back(n);
    }
  }
  std::vector<std::string> gold;
  for (const auto& g : record.gold_elements) {
    const std::string n = text::normalize(g);
    if (std::find(gold.begin(), gold.end(), n) != gold.end()) {
      record_error(record, "gold_elements", "duplicate element '" + g + "'");
    }
    gold.push_back(n);
  }
  std::size_t cursor = 0;
  for (const auto& g : gold) {
    auto it = std::find(distinct.begin() + cursor, distinct.end(), g);
    if (it == distinct.end()) {
      record_error(record, "gold_elements",
                   "element '" + g +
                       "' is not covered by a template placeholder (or is out of order)");
    }
    cursor = std::size_t(it - distinct.begin()) + 1;
  }
  for (auto& slot : slots) {
    const std::string n = text::normalize(slot.phrase);
    slot.personalized = std::find(gold.begin(), gold.end(), n) != gold.end();
  }
  return slots;
}

namespace {

Instruction record_from_json(const ordered_json& j) {
  Instruction r;
  if (!j.is_object()) throw ParseError("corpus record is not an object");
  try {
    r.id = j.at("id").get<int>();
    r.text = j.at("text").get<std::string>();
    const auto diff = j.at("difficulty").get<std::string>();
    const auto parsed = parse_difficulty(diff);
    if (!parsed) record_error(r, "difficulty", "unknown difficulty '" + diff + "'");
    r.difficulty = *parsed;
    r.min_steps = j.at("min_steps").get<int>();
    r.apps = j.at("apps").get<std::vector<std::string>>();
    r.completed_template = j.at("completed_template").get<std::string>();
    r.gold_elements = j.at("gold_elements").get<std::vector<std::string>>();
    r.info_types = j.at("info_types").get<std::vector<std::string>>();
  } catch (const ordered_json::exception& e) {
    throw ParseError("corpus record" +
                     (j.contains("id") ? " id " + j["id"].dump() : std::string()) +
                     ": " + e.what());
  }
  if (r.id <= 0) record_error(r, "id", "must be positive");
  if (text::trim(r.text).empty()) record_error(r, "text", "must be non-empty");
  if (r.min_steps < 1) record_error(r, "min_steps", "must be >= 1");
  if (r.apps.empty()) record_error(r, "apps", "must be non-empty");
  for (const auto& a : r.apps) {
    if (text::trim(a).empty()) record_error(r, "apps", "contains an empty app name");
  }
  for (const auto& g : r.gold_elements) {
    if (text::trim(g).empty()) record_error(r, "gold_elements", "contains an empty phrase");
  }
  bind_slots(r);
  return r;
}

}  // namespace

std::vector<Instruction> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file: " + path.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw ParseError("corpus " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError("corpus " + path.string() + ": top level must be an array");
  if (doc.empty()) throw ParseError("corpus " + path.string() + ": no records");

  std::vector<Instruction> corpus;
  std::set<int> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    Instruction r;
    try {
      r = record_from_json(doc[i]);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ValidationError("corpus " + path.string() + ", record " +
                            std::to_string(i + 1) + ": " + e.what());
    }
    if (!seen.insert(r.id).second) {
      throw ValidationError("corpus " + path.string() + ": duplicate id " +
                            std::to_string(r.id));
    }
    corpus.push_back(std::move(r));
  }
  return corpus;
}

void save_corpus(const std::vector<Instruction>& corpus,
                 const std::filesystem::path& path) {
  ordered_json doc = ordered_json::array();
  for (const auto& r : corpus) {
    // corpus files use the easy/normal/difficult spellings
    std::string diff;
    switch (r.difficulty) {
      case Difficulty::Simple: diff = "easy"; break;
      case Difficulty::Normal: diff = "normal"; break;
      case Difficulty::Hard: diff = "difficult"; break;
    }
    doc.push_back(ordered_json{{"id", r.id},
                               {"text", r.text},
                               {"difficulty", diff},
                               {"min_steps", r.min_steps},
                               {"apps", r.apps},
                               {"completed_template", r.completed_template},
                               {"gold_elements", r.gold_elements},
                               {"info_types", r.info_types}});
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write corpus file: " + path.string());
  out << doc.dump(2) << "\n";
}

namespace {

// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= double(n);
  mb /= double(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) {
    throw ValidationError("correlation undefined: zero variance");
  }
  return cov / std::sqrt(va * vb);
}

}  // namespace

double spearman_dlc(const std::vector<Instruction>& corpus) {
  if (corpus.size() < 2) {
    throw ValidationError("correlation undefined: fewer than 2 records");
  }
  std::vector<double> diff, steps;
  diff.reserve(corpus.size());
  steps.reserve(corpus.size());
  for (const auto& r : corpus) {
    diff.push_back(1.0 + double(static_cast<int>(r.difficulty)));
    steps.push_back(double(r.min_steps));
  }
  return pearson(average_ranks(diff), average_ranks(steps));
}

double distribution_entropy(const std::map<std::string, std::int64_t>& counts) {
  if (counts.size() < 2) {
    throw ValidationError("entropy undefined: fewer than 2 categories");
  }
  std::int64_t total = 0;
  for (const auto& [cat, c] : counts) {
    if (c < 0) throw ValidationError("entropy undefined: negative count for " + cat);
    total += c;
  }
  if (total == 0) throw ValidationError("entropy undefined: all counts zero");
  double h = 0.0;
  for (const auto& [cat, c] : counts) {
    if (c == 0) continue;
    const double p = double(c) / double(total);
    h -= p * std::log(p);
  }
  return h / std::log(double(counts.size()));
}

DatasetQualityReport quality_report(const std::vector<Instruction>& corpus) {
  DatasetQualityReport report;
  report.counts_by_difficulty = {{Difficulty::Simple, 0},
                                 {Difficulty::Normal, 0},
                                 {Difficulty::Hard, 0}};
  std::map<std::string, std::int64_t> app_occurrences;
  for (const auto& r : corpus) {
    report.counts_by_difficulty[r.difficulty] += 1;
    for (const auto& a : r.apps) app_occurrences[text::normalize(a)] += 1;
  }
  report.dlc = spearman_dlc(corpus);
  // fixed three-level taxonomy, absent levels included with zero count
  std::map<std::string, std::int64_t> diff_counts;
  for (const auto& [d, c] : report.counts_by_difficulty) {
    diff_counts[std::string(to_string(d))] = c;
  }
  report.de_difficulty = distribution_entropy(diff_counts);
  report.de_diversity = distribution_entropy(app_occurrences);
  return report;
}

}  // namespace perpilot
