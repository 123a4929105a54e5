#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lunar/backend.hpp"
#include "lunar/core.hpp"
#include "lunar/lcu_selector.hpp"
#include "lunar/prompt.hpp"
#include "lunar/sharder.hpp"

namespace lunar {

inline constexpr TemplateId kUnassigned = 0xffffffffu;

struct ParserConfig {
  std::size_t top_k = 3;         // signature length
  std::size_t max_bucket = 100;  // agglomerative freeze threshold
  SelectorConfig selector;
  std::size_t workers = 8;
  std::uint64_t seed = 0;
  std::vector<ParameterExample> examples = default_parameter_examples();
  /// Partial results land here when a group fails; empty disables the dump.
  std::string recovery_path;
};

/// Distinct templates with stable ids and per-template matched counts.
class TemplateStore {
 public:
  /// Returns the existing id for an identical token list, or a fresh one.
  TemplateId intern(const Template& t);

  void add_matches(TemplateId id, std::uint64_t n) { matched_[id] += n; }

  const Template& at(TemplateId id) const { return templates_[id]; }
  std::uint64_t matched(TemplateId id) const { return matched_[id]; }
  std::size_t size() const { return templates_.size(); }

 private:
  std::vector<Template> templates_;
  std::vector<std::uint64_t> matched_;
  std::map<std::vector<std::string>, TemplateId> index_;
};

struct ParseStats {
  std::uint64_t iterations = 0;
  std::uint64_t queries = 0;
  std::uint64_t extraction_retries = 0;
  std::uint64_t fallbacks = 0;
};

struct ParseResult {
  std::vector<TemplateId> line_to_template;  // indexed by line_id
  TemplateStore store;
  ParseStats stats;
};

/// One group's worth of parsing, with ids local to `store`.
struct GroupResult {
  std::size_t token_count = 0;
  std::vector<std::pair<LineId, TemplateId>> assignment;
  TemplateStore store;
  ParseStats stats;
};

/// Assigns the template to every matching unparsed record across all buckets
/// of the group, removes matched records and empty buckets, and returns the
/// match count. The template is interned only when it matched something.
std::size_t apply_template(const Template& t, const LogSet& logs,
                           LengthGroup& group, TemplateStore& store,
                           std::vector<std::pair<LineId, TemplateId>>& out);

/// Drains one length group: repeatedly pick the fullest bucket (ties toward
/// the smallest signature), select an LCU, query, extract, and apply. An
/// extraction failure retries the query once, then falls back to the anchor
/// log's verbatim all-constant template, which always matches the anchor.
GroupResult parse_group(const LogSet& logs, const LengthGroup& group,
                        const ParserConfig& cfg, Backend& backend,
                        std::uint64_t group_seed);

/// Runs every length group on a pool of cfg.workers threads and merges the
/// results in ascending token-count order, so template ids do not depend on
/// worker count or scheduling. A group failure aborts the run, dumps any
/// finished groups to cfg.recovery_path, and rethrows as ParseRunError.
ParseResult parse_all(const LogSet& logs, const ShardIndex& index,
                      const ParserConfig& cfg, Backend& backend);

/// Per-line output: line_id, template_id, template text.
void write_assignments(const std::string& path, const ParseResult& result);

/// Per-template output: template_id, template text, match count.
void write_templates(const std::string& path, const TemplateStore& store);

}  // namespace lunar
