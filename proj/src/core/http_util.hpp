#pragma once

#include <string>
#include <string_view>

namespace extractbench::detail {

/// "http://host:8080/api/v1" -> {"http://host:8080", "/api/v1"}.
struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(std::string_view url);

/// Joins a base path and a route without doubling the slash.
std::string join_path(std::string_view base, std::string_view route);

}  // namespace extractbench::detail
