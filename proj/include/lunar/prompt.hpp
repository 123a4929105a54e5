#pragma once

#include <string>
#include <vector>

#include "lunar/core.hpp"
#include "lunar/lcu_selector.hpp"

namespace lunar {

struct ParameterExample {
  std::string value;
  std::string type_name;
};

/// A fully assembled parsing prompt. `render()` produces the query text with
/// the four sections in order: task instruction, parameter examples, output
/// constraints, queried logs. `member_ids[i]` is the line behind "Log[i+1]".
struct PromptSpec {
  std::string instruction_text;
  std::vector<ParameterExample> parameter_examples;
  std::string output_constraint_text;
  std::vector<std::string> lcu_logs;
  std::vector<LineId> member_ids;

  std::string render() const;
};

/// Built-in example set: directory path, IP address, numeric id, URL,
/// hexadecimal value.
std::vector<ParameterExample> default_parameter_examples();

/// Reads overrides from a JSON array of {"value": ..., "type": ...} objects.
/// Throws FormatError on malformed content, IoError when unreadable.
std::vector<ParameterExample> load_parameter_examples(const std::string& path);

PromptSpec build_prompt(const CandidateLcu& lcu, const LogSet& logs,
                        const std::vector<ParameterExample>& examples);

}  // namespace lunar
