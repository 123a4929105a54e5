#include "lunar/ingest.hpp"

#include <cctype>
#include <fstream>

#include "lunar/csv.hpp"

namespace lunar {

std::vector<std::string> tokenize(std::string_view content) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < content.size()) {
    while (i < content.size() &&
           std::isspace(static_cast<unsigned char>(content[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < content.size() &&
           !std::isspace(static_cast<unsigned char>(content[i]))) {
      ++i;
    }
    if (i > start) tokens.emplace_back(content.substr(start, i - start));
  }
  return tokens;
}

namespace {

std::string strip(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

void append_record(LogSet& set, std::string content) {
  LogRecord rec;
  rec.line_id = static_cast<LineId>(set.records.size());
  rec.tokens = tokenize(content);
  rec.content = std::move(content);
  set.records.push_back(std::move(rec));
}

LogSet load_plain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  LogSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string content = strip(line);
    if (content.empty()) continue;
    append_record(set, std::move(content));
  }
  return set;
}

LogSet load_structured(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  const auto col = table.column("Content");
  if (!col) {
    throw FormatError(path.string() + ": no \"Content\" column");
  }
  LogSet set;
  for (auto& row : table.rows) {
    if (*col >= row.size()) continue;
    std::string content = strip(row[*col]);
    if (content.empty()) continue;
    append_record(set, std::move(content));
  }
  return set;
}

}  // namespace

LogSet load_logs(const std::filesystem::path& path, LogFormat format) {
  switch (format) {
    case LogFormat::kPlain:
      return load_plain(path);
    case LogFormat::kStructuredCsv:
      return load_structured(path);
  }
  throw ConfigError("unknown log format");
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  const auto col = table.column("EventTemplate");
  if (!col) {
    throw FormatError(path.string() + ": no \"EventTemplate\" column");
  }
  GroundTruth truth;
  truth.templates.reserve(table.rows.size());
  for (auto& row : table.rows) {
    if (*col >= row.size()) {
      throw FormatError(path.string() + ": short row in ground truth");
    }
    truth.templates.push_back(strip(row[*col]));
  }
  return truth;
}

}  // namespace lunar
