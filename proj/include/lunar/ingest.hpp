#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "lunar/core.hpp"

namespace lunar {

enum class LogFormat { kPlain, kStructuredCsv };

/// Splits on runs of whitespace; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view content);

/// Loads a log dataset. Plain format reads one message per line; structured
/// CSV reads the "Content" column. Blank messages are skipped and do not
/// consume a line_id.
LogSet load_logs(const std::filesystem::path& path, LogFormat format);

/// Loads oracle templates from a CSV with an "EventTemplate" column.
/// Row order defines the line_id.
GroundTruth load_ground_truth(const std::filesystem::path& path);

}  // namespace lunar
