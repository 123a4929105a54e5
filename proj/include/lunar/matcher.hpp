#pragma once

#include <string>
#include <vector>

#include "lunar/core.hpp"

namespace lunar {

/// True iff the token list can be produced from the template, where each
/// literal template token matches the identical log token and each
/// placeholder consumes one or more consecutive log tokens.
bool match(const Template& t, const std::vector<std::string>& tokens);

inline bool match(const Template& t, const LogRecord& record) {
  return match(t, record.tokens);
}

}  // namespace lunar
