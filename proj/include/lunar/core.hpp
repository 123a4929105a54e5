#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lunar {

using LineId = std::uint32_t;
using TemplateId = std::uint32_t;

inline constexpr std::string_view kPlaceholder = "<*>";

/// One raw log line. `tokens` is always the whitespace split of `content`
/// with empty fragments discarded.
struct LogRecord {
  LineId line_id = 0;
  std::string content;
  std::vector<std::string> tokens;
};

/// An ordered log corpus. line_id equals the record's index.
struct LogSet {
  std::vector<LogRecord> records;

  const LogRecord& at(LineId id) const { return records[id]; }
  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

/// Oracle template text per line_id (placeholder form with <*>).
struct GroundTruth {
  std::vector<std::string> templates;

  std::size_t size() const { return templates.size(); }
  const std::string& at(LineId id) const { return templates[id]; }
};

/// A parsed template: literal tokens plus whole-token <*> placeholders.
struct Template {
  std::vector<std::string> tokens;

  bool operator==(const Template&) const = default;

  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) out += ' ';
      out += tokens[i];
    }
    return out;
  }
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseRunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lunar
