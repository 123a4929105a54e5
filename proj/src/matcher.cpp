#include "lunar/matcher.hpp"

namespace lunar {

bool match(const Template& t, const std::vector<std::string>& tokens) {
  const std::size_t n = tokens.size();
  const std::size_t m = t.tokens.size();

  // reach[j]: template prefix of length j can produce the token prefix
  // consumed so far. Placeholders need >= 1 token, so a row update never
  // keeps a placeholder satisfied "for free".
  std::vector<char> reach(m + 1, 0);
  reach[0] = 1;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> next(m + 1, 0);
    for (std::size_t j = 0; j < m; ++j) {
      const std::string& pat = t.tokens[j];
      if (pat == kPlaceholder) {
        // Consume tokens[i] as the placeholder's first token (reach[j]) or
        // as an extension of a placeholder already in progress (next[j+1]).
        if (reach[j]) next[j + 1] = 1;
      } else if (reach[j] && pat == tokens[i]) {
        next[j + 1] = 1;
      }
    }
    // Extension pass: a placeholder that already covers some suffix may
    // swallow tokens[i] too.
    for (std::size_t j = 0; j < m; ++j) {
      if (t.tokens[j] == kPlaceholder && reach[j + 1]) next[j + 1] = 1;
    }
    reach = std::move(next);
  }
  return reach[m] != 0;
}

}  // namespace lunar
