#include "lunar/metrics.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "json.hpp"
#include "lunar/csv.hpp"
#include "lunar/ingest.hpp"

namespace lunar {

Labeling labeling_from_result(const ParseResult& result) {
  Labeling l;
  l.group_of_line.reserve(result.line_to_template.size());
  for (TemplateId id : result.line_to_template) {
    l.group_of_line.push_back(id);
  }
  l.template_of_group.reserve(result.store.size());
  for (TemplateId id = 0; id < result.store.size(); ++id) {
    l.template_of_group.push_back(result.store.at(id).text());
  }
  return l;
}

Labeling labeling_from_templates(const std::vector<std::string>& per_line) {
  Labeling l;
  l.group_of_line.reserve(per_line.size());
  std::unordered_map<std::string, std::size_t> ids;
  for (const std::string& text : per_line) {
    auto [it, inserted] = ids.try_emplace(text, l.template_of_group.size());
    if (inserted) l.template_of_group.push_back(text);
    l.group_of_line.push_back(it->second);
  }
  return l;
}

std::string normalize_for_comparison(const std::string& template_text) {
  const std::vector<std::string> tokens = tokenize(template_text);
  std::string out;
  bool last_was_placeholder = false;
  for (const std::string& token : tokens) {
    const bool is_placeholder = token == kPlaceholder;
    if (is_placeholder && last_was_placeholder) continue;
    if (!out.empty()) out += ' ';
    out += token;
    last_was_placeholder = is_placeholder;
  }
  return out;
}

EvaluationReport evaluate(const Labeling& predicted, const Labeling& oracle) {
  if (predicted.line_count() != oracle.line_count()) {
    throw InputError("prediction covers " +
                     std::to_string(predicted.line_count()) +
                     " lines but the oracle covers " +
                     std::to_string(oracle.line_count()));
  }
  const std::size_t n = predicted.line_count();

  EvaluationReport report;
  report.predicted_template_count = predicted.group_count();
  report.oracle_template_count = oracle.group_count();
  if (n == 0) return report;

  std::vector<std::size_t> pred_size(predicted.group_count(), 0);
  std::vector<std::size_t> oracle_size(oracle.group_count(), 0);
  // (predicted group, oracle group) -> shared line count.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> overlap;
  for (std::size_t line = 0; line < n; ++line) {
    const std::size_t p = predicted.group_of_line[line];
    const std::size_t o = oracle.group_of_line[line];
    ++pred_size[p];
    ++oracle_size[o];
    ++overlap[{p, o}];
  }

  // A predicted group equals an oracle group iff their overlap exhausts
  // both. Groups partition the lines, so each side matches at most once.
  std::size_t ga_correct_lines = 0;
  std::size_t group_correct = 0;
  std::size_t string_correct = 0;
  std::vector<TemplateRow> rows(oracle.group_count());
  for (std::size_t o = 0; o < oracle.group_count(); ++o) {
    rows[o].oracle_template = oracle.template_of_group[o];
    rows[o].log_count = oracle_size[o];
  }
  for (const auto& [pair, count] : overlap) {
    const auto [p, o] = pair;
    if (count != pred_size[p] || count != oracle_size[o]) continue;
    ga_correct_lines += count;
    ++group_correct;
    rows[o].group_matched = true;
    rows[o].matched_prediction = predicted.template_of_group[p];
    if (normalize_for_comparison(predicted.template_of_group[p]) ==
        normalize_for_comparison(oracle.template_of_group[o])) {
      rows[o].string_matched = true;
      ++string_correct;
    }
  }
  report.rows = std::move(rows);
  report.ga = static_cast<double>(ga_correct_lines) / static_cast<double>(n);

  std::size_t pa_correct = 0;
  for (std::size_t line = 0; line < n; ++line) {
    const std::string& p =
        predicted.template_of_group[predicted.group_of_line[line]];
    const std::string& o = oracle.template_of_group[oracle.group_of_line[line]];
    if (normalize_for_comparison(p) == normalize_for_comparison(o)) {
      ++pa_correct;
    }
  }
  report.pa = static_cast<double>(pa_correct) / static_cast<double>(n);

  const auto f_score = [&](std::size_t correct) {
    const double precision = static_cast<double>(correct) /
                             static_cast<double>(predicted.group_count());
    const double recall = static_cast<double>(correct) /
                          static_cast<double>(oracle.group_count());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
  };
  report.fga = f_score(group_correct);
  report.fta = f_score(string_correct);
  return report;
}

void write_report_text(std::ostream& out, const EvaluationReport& report) {
  out << "grouping_accuracy: " << report.ga << "\n"
      << "parsing_accuracy: " << report.pa << "\n"
      << "fga: " << report.fga << "\n"
      << "fta: " << report.fta << "\n"
      << "predicted_templates: " << report.predicted_template_count << "\n"
      << "oracle_templates: " << report.oracle_template_count << "\n";
}

void write_report_json(const std::string& path,
                       const EvaluationReport& report) {
  nlohmann::json doc = {
      {"grouping_accuracy", report.ga},
      {"parsing_accuracy", report.pa},
      {"fga", report.fga},
      {"fta", report.fta},
      {"predicted_templates", report.predicted_template_count},
      {"oracle_templates", report.oracle_template_count},
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report to " + path);
  out << doc.dump(2) << "\n";
}

void write_report_rows(const std::string& path,
                       const EvaluationReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write template breakdown to " + path);
  write_csv_row(out, {"OracleTemplate", "LogCount", "GroupMatched",
                      "StringMatched", "MatchedPrediction"});
  for (const TemplateRow& row : report.rows) {
    write_csv_row(out, {row.oracle_template, std::to_string(row.log_count),
                        row.group_matched ? "true" : "false",
                        row.string_matched ? "true" : "false",
                        row.matched_prediction});
  }
}

}  // namespace lunar
