#include "lunar/generator.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "lunar/core.hpp"
#include "lunar/csv.hpp"
#include "lunar/rng.hpp"

namespace lunar {
namespace {

constexpr std::array kWords = {
    "connection", "from",     "user",     "session",   "opened",
    "closed",     "failed",   "accepted", "rejected",  "request",
    "response",   "block",    "replica",  "node",      "worker",
    "job",        "task",     "queue",    "cache",     "disk",
    "memory",     "timeout",  "retry",    "started",   "finished",
    "allocated",  "released", "received", "sent",      "bytes",
    "packet",     "route",    "table",    "index",     "scan",
    "commit",     "rollback", "lease",    "heartbeat", "daemon",
};

enum class SlotType { kNumber, kHexId, kPath, kIp };

std::string draw_value(SlotType type, Rng& rng) {
  switch (type) {
    case SlotType::kNumber:
      return std::to_string(rng.below(100000));
    case SlotType::kHexId: {
      static constexpr char kDigits[] = "0123456789abcdef";
      std::string v = "0x";
      for (int i = 0; i < 8; ++i) v += kDigits[rng.below(16)];
      return v;
    }
    case SlotType::kPath: {
      std::string v;
      const std::size_t depth = 2 + rng.below(2);
      for (std::size_t i = 0; i < depth; ++i) {
        v += '/';
        v += kWords[rng.below(kWords.size())];
      }
      return v;
    }
    case SlotType::kIp: {
      std::ostringstream v;
      v << rng.below(256) << '.' << rng.below(256) << '.' << rng.below(256)
        << '.' << rng.below(256);
      return v.str();
    }
  }
  return {};
}

struct TemplateShape {
  std::vector<std::string> tokens;  // placeholder marks a slot
  std::vector<SlotType> slot_types;  // one per placeholder, in order
};

TemplateShape draw_template(std::size_t length, std::size_t index, Rng& rng) {
  TemplateShape shape;
  shape.tokens.assign(length, {});

  const std::size_t slots = 1 + rng.below(std::min<std::size_t>(3, length - 1));
  // Distinct slot positions, leaving room for the marker.
  std::vector<std::size_t> positions(length);
  for (std::size_t i = 0; i < length; ++i) positions[i] = i;
  for (std::size_t i = 0; i < slots + 1; ++i) {
    std::swap(positions[i], positions[i + rng.below(length - i)]);
  }
  for (std::size_t i = 0; i < slots; ++i) {
    shape.tokens[positions[i]] = kPlaceholder;
    shape.slot_types.push_back(
        static_cast<SlotType>(rng.below(4)));
  }
  // Unique marker keeps template strings distinct and prevents one
  // template's constants from matching another template's logs.
  shape.tokens[positions[slots]] = "ev" + std::to_string(index);

  for (std::string& token : shape.tokens) {
    if (token.empty()) token = kWords[rng.below(kWords.size())];
  }
  // slot_types follows placeholder order left to right.
  std::vector<SlotType> ordered;
  std::vector<std::size_t> slot_positions;
  for (std::size_t i = 0; i < slots; ++i) slot_positions.push_back(positions[i]);
  std::sort(slot_positions.begin(), slot_positions.end());
  for (std::size_t pos : slot_positions) {
    for (std::size_t i = 0; i < slots; ++i) {
      if (positions[i] == pos) ordered.push_back(shape.slot_types[i]);
    }
  }
  shape.slot_types = std::move(ordered);
  return shape;
}

}  // namespace

SyntheticCorpus generate_corpus(const GeneratorConfig& cfg) {
  if (cfg.templates == 0) throw ConfigError("template count must be positive");
  if (cfg.logs_per_template == 0) {
    throw ConfigError("logs-per-template must be positive");
  }
  if (cfg.min_length < 3 || cfg.max_length < cfg.min_length) {
    throw ConfigError("length range must satisfy 3 <= min <= max");
  }

  Rng rng(cfg.seed);
  const std::size_t span = cfg.max_length - cfg.min_length + 1;

  SyntheticCorpus corpus;
  corpus.lines.reserve(cfg.templates * cfg.logs_per_template);
  corpus.truth.reserve(corpus.lines.capacity());

  for (std::size_t t = 0; t < cfg.templates; ++t) {
    const std::size_t length = cfg.min_length + (t % span);
    const TemplateShape shape = draw_template(length, t, rng);

    std::string oracle;
    for (const std::string& token : shape.tokens) {
      if (!oracle.empty()) oracle += ' ';
      oracle += token;
    }

    for (std::size_t n = 0; n < cfg.logs_per_template; ++n) {
      std::string line;
      std::size_t slot = 0;
      for (const std::string& token : shape.tokens) {
        if (!line.empty()) line += ' ';
        if (token == kPlaceholder) {
          line += draw_value(shape.slot_types[slot++], rng);
        } else {
          line += token;
        }
      }
      corpus.lines.push_back(std::move(line));
      corpus.truth.push_back(oracle);
    }
  }

  // Interleave templates the way a real log mixes events.
  for (std::size_t i = corpus.lines.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(corpus.lines[i - 1], corpus.lines[j]);
    std::swap(corpus.truth[i - 1], corpus.truth[j]);
  }
  return corpus;
}

void write_corpus(const SyntheticCorpus& corpus, const std::string& log_path,
                  const std::string& truth_path) {
  std::ofstream logs(log_path);
  if (!logs) throw IoError("cannot write log file " + log_path);
  for (const std::string& line : corpus.lines) logs << line << "\n";

  std::ofstream truth(truth_path);
  if (!truth) throw IoError("cannot write truth file " + truth_path);
  write_csv_row(truth, {"LineId", "Content", "EventTemplate"});
  for (std::size_t i = 0; i < corpus.lines.size(); ++i) {
    write_csv_row(truth,
                  {std::to_string(i), corpus.lines[i], corpus.truth[i]});
  }
}

}  // namespace lunar
