#include "http_util.hpp"

#include "extractbench/errors.hpp"

namespace extractbench::detail {

SplitUrl split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "URL needs a scheme: " + std::string(url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) return {std::string(url), ""};
  std::string path(url.substr(path_start));
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {std::string(url.substr(0, path_start)), path};
}

std::string join_path(std::string_view base, std::string_view route) {
  std::string out(base);
  if (!out.empty() && out.back() == '/') out.pop_back();
  if (route.empty() || route.front() != '/') out.push_back('/');
  out.append(route);
  return out;
}

}  // namespace extractbench::detail
