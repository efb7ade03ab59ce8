#include "extractbench/dates.hpp"

#include <array>
#include <cctype>
#include <regex>
#include <string>

namespace extractbench {

namespace {

std::string_view trim(std::string_view s) {
  auto space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<std::chrono::sys_days> make_date(int y, unsigned m, unsigned d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

std::optional<unsigned> month_from_name(std::string name) {
  static const std::array<const char*, 12> names = {"january", "february", "march",     "april",
                                                    "may",     "june",     "july",      "august",
                                                    "september", "october", "november", "december"};
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (unsigned i = 0; i < names.size(); ++i) {
    const std::string full = names[i];
    if (name == full || name == full.substr(0, 3)) return i + 1;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::chrono::sys_days> parse_date(std::string_view text) {
  static const std::regex iso(
      R"(^(\d{4})-(\d{2})-(\d{2})(?:[T ]\d{2}:\d{2}(?::\d{2}(?:\.\d+)?)?(?:Z|[+-]\d{2}:?\d{2})?)?$)");
  static const std::regex slashed(R"(^(\d{4})/(\d{1,2})/(\d{1,2})$)");
  static const std::regex named(R"(^([A-Za-z]+)\.?\s+(\d{1,2}),\s*(\d{4})$)");
  static const std::regex year_only(R"(^(\d{4})$)");

  const std::string s(trim(text));
  std::smatch m;
  if (std::regex_match(s, m, iso) || std::regex_match(s, m, slashed)) {
    return make_date(std::stoi(m[1]), static_cast<unsigned>(std::stoi(m[2])),
                     static_cast<unsigned>(std::stoi(m[3])));
  }
  if (std::regex_match(s, m, named)) {
    const auto month = month_from_name(m[1]);
    if (!month) return std::nullopt;
    return make_date(std::stoi(m[3]), *month, static_cast<unsigned>(std::stoi(m[2])));
  }
  if (std::regex_match(s, m, year_only)) return make_date(std::stoi(m[1]), 1, 1);
  return std::nullopt;
}

}  // namespace extractbench
