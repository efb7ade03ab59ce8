#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace extractbench {

/// Byte offsets of each Unicode scalar in `s`, plus a final entry equal to
/// s.size(). Malformed UTF-8 bytes count as one character each.
std::vector<std::size_t> utf8_boundaries(std::string_view s);

std::size_t utf8_length(std::string_view s);

/// 64-bit FNV-1a over the bytes of `s`, starting from the standard offset
/// basis xor `seed`.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

std::string to_hex64(std::uint64_t v);

}  // namespace extractbench
