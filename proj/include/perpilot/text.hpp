#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perpilot::text {

std::string trim(std::string_view s);
std::string lower(std::string_view s);

// Canonical form used for element/memory-key comparison:
// lowercase + trim + collapse runs of internal whitespace to single spaces.
std::string normalize(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
bool icontains(std::string_view hay, std::string_view needle);
std::optional<std::size_t> ifind(std::string_view hay, std::string_view needle,
                                 std::size_t from = 0);

std::vector<std::string> split(std::string_view s, char delim);

// Trimmed, non-empty lines.
std::vector<std::string> split_lines(std::string_view s);

// Substitute "{key}" occurrences; unknown keys are left untouched.
std::string fill_template(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& vars);

// Render a phrase list as ['a', 'b'].
std::string quoted_list(const std::vector<std::string>& items);

}  // namespace perpilot::text
