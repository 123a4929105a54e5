#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lunar/core.hpp"
#include "lunar/parser_core.hpp"

namespace lunar {

/// Per-line grouping plus one template string per group. The group ids are
/// dense and arbitrary; every metric is invariant under renaming them.
struct Labeling {
  std::vector<std::size_t> group_of_line;
  std::vector<std::string> template_of_group;

  std::size_t line_count() const { return group_of_line.size(); }
  std::size_t group_count() const { return template_of_group.size(); }
};

/// Groups lines by their assigned template id.
Labeling labeling_from_result(const ParseResult& result);

/// Groups lines by exact template string, in first-appearance order. This is
/// how oracle files define their grouping.
Labeling labeling_from_templates(const std::vector<std::string>& per_line);

/// Comparison form of a template string: whitespace collapsed to single
/// spaces, leading/trailing whitespace dropped, and runs of adjacent
/// placeholder tokens collapsed to one.
std::string normalize_for_comparison(const std::string& template_text);

struct TemplateRow {
  std::string oracle_template;
  std::size_t log_count = 0;
  bool group_matched = false;
  bool string_matched = false;
  std::string matched_prediction;  // set when group_matched
};

struct EvaluationReport {
  double ga = 1.0;
  double pa = 1.0;
  double fga = 1.0;
  double fta = 1.0;
  std::size_t predicted_template_count = 0;
  std::size_t oracle_template_count = 0;
  std::vector<TemplateRow> rows;
};

/// Computes all four metrics. Throws InputError when the two labelings do
/// not cover the same number of lines. Empty inputs score 1.0 across the
/// board.
EvaluationReport evaluate(const Labeling& predicted, const Labeling& oracle);

void write_report_text(std::ostream& out, const EvaluationReport& report);
void write_report_json(const std::string& path,
                       const EvaluationReport& report);
/// Per-oracle-template breakdown as CSV rows.
void write_report_rows(const std::string& path,
                       const EvaluationReport& report);

}  // namespace lunar
