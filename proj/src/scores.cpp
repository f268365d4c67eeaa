#include "housing/scores.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "housing/errors.hpp"

namespace housing {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Ahp: return "AHP";
    case Method::Wsm: return "WSM";
    case Method::Promethee: return "PROMETHEE";
    case Method::Aggregate: return "AGGREGATE";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "ahp") return Method::Ahp;
  if (t == "wsm") return Method::Wsm;
  if (t == "promethee") return Method::Promethee;
  if (t == "aggregate") return Method::Aggregate;
  throw DomainError("method must be one of ahp, wsm, promethee, aggregate; got '" +
                    std::string(text) + "'");
}

}  // namespace housing
