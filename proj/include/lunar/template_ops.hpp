#pragma once

#include <string>
#include <vector>

#include "lunar/core.hpp"

namespace lunar {

/// Pulls every backtick-delimited span labeled "LogTemplate[idx]" out of a
/// model response, in order of appearance.
/// Throws ExtractionError when no such span exists.
std::vector<std::string> extract_templates(const std::string& response_text);

/// Replaces each brace-bracketed span with the placeholder, tokenizes on
/// whitespace, and squashes any token containing the placeholder down to a
/// bare placeholder token. Idempotent on already-normalized text.
Template normalize_template_text(const std::string& raw);

/// Majority vote over the raw strings (ties favor first appearance), then
/// normalization. Throws InputError on an empty list.
Template aggregate_and_normalize(const std::vector<std::string>& raw);

}  // namespace lunar
