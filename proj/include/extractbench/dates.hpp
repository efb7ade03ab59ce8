#pragma once

#include <chrono>
#include <optional>
#include <string_view>

namespace extractbench {

/// Recognizes a whole trimmed string as one of:
///   YYYY-MM-DD (optionally followed by a time, which is discarded)
///   YYYY/MM/DD
///   Month D, YYYY   (full or three-letter month name, any case)
///   YYYY            (anchored at January 1)
/// Returns nullopt for anything else, including invalid calendar dates.
std::optional<std::chrono::sys_days> parse_date(std::string_view text);

}  // namespace extractbench
