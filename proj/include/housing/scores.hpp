#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace housing {

enum class Method { Ahp, Wsm, Promethee, Aggregate };

std::string_view to_string(Method method);  // "AHP", "WSM", "PROMETHEE", "AGGREGATE"
Method parse_method(std::string_view text);  // case-insensitive; throws DomainError

// One finite score per alternative, aligned with ids. Higher is better.
struct ScoreVector {
  Method method = Method::Wsm;
  std::vector<std::string> ids;
  std::vector<double> scores;

  bool operator==(const ScoreVector&) const = default;
};

}  // namespace housing
