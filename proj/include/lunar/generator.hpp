#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lunar {

struct GeneratorConfig {
  std::size_t templates = 10;
  std::size_t logs_per_template = 100;
  std::uint64_t seed = 0;
  /// Token counts cycle through [min_length, max_length] template by
  /// template, so template count caps the number of length groups.
  std::size_t min_length = 4;
  std::size_t max_length = 19;
};

/// Lines and their oracle templates, index-aligned, in shuffled order.
struct SyntheticCorpus {
  std::vector<std::string> lines;
  std::vector<std::string> truth;
};

/// Deterministic function of the config: templates are random constant
/// words carrying a unique marker token plus 1-3 single-token parameter
/// slots (numbers, hex ids, paths, IPs). All logs of one template share a
/// token count. Throws ConfigError on zero templates or logs-per-template,
/// or an invalid length range.
SyntheticCorpus generate_corpus(const GeneratorConfig& cfg);

/// Plain log file plus a CSV oracle (LineId, Content, EventTemplate).
void write_corpus(const SyntheticCorpus& corpus, const std::string& log_path,
                  const std::string& truth_path);

}  // namespace lunar
