#include "lunar/prompt.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lunar {
namespace {

constexpr const char* kInstruction =
    "You will receive a group of log messages produced by the same or "
    "closely related logging statements. Abstract each message into a log "
    "template: keep the constant words and replace every parameter value "
    "with a placeholder wrapped in curly braces, such as {user_name}. The "
    "messages are similar to each other, so compare them token by token and "
    "treat positions whose values differ across the group as parameters. "
    "Parameters are typically dynamic values such as paths, addresses, "
    "identifiers, sizes, or durations. Do not turn error messages or "
    "exception names into parameters; they carry diagnostic meaning and "
    "belong in the template.";

constexpr const char* kOutputConstraint =
    "Output exactly one template per input log, in the same order. Write "
    "each on its own line as LogTemplate[idx] followed by the template "
    "wrapped in backticks, where idx is the log's index. Example: "
    "LogTemplate[1]: `accepted connection from {ip}`.";

}  // namespace

std::string PromptSpec::render() const {
  std::ostringstream out;
  out << instruction_text << "\n";
  if (!parameter_examples.empty()) {
    out << "\nExamples of parameter values and their types:\n";
    for (const ParameterExample& ex : parameter_examples) {
      out << ex.value << " -> {" << ex.type_name << "}\n";
    }
  }
  out << "\n" << output_constraint_text << "\n\n";
  for (std::size_t i = 0; i < lcu_logs.size(); ++i) {
    out << "Log[" << (i + 1) << "]: " << lcu_logs[i] << "\n";
  }
  return out.str();
}

std::vector<ParameterExample> default_parameter_examples() {
  return {
      {"/var/www/html/", "directory"},
      {"192.168.0.101", "ip_address"},
      {"1409", "numeric_id"},
      {"https://github.com/apache/hadoop", "url"},
      {"0x7f3a9c40", "hexadecimal"},
  };
}

std::vector<ParameterExample> load_parameter_examples(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter example file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("invalid JSON in " + path + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw FormatError("parameter example file must hold a JSON array");
  }
  std::vector<ParameterExample> examples;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("value") ||
        !item.contains("type") || !item["value"].is_string() ||
        !item["type"].is_string()) {
      throw FormatError(
          "each parameter example needs string fields \"value\" and "
          "\"type\"");
    }
    examples.push_back({item["value"].get<std::string>(),
                        item["type"].get<std::string>()});
  }
  return examples;
}

PromptSpec build_prompt(const CandidateLcu& lcu, const LogSet& logs,
                        const std::vector<ParameterExample>& examples) {
  if (lcu.member_ids.empty()) {
    throw InputError("cannot build a prompt from an empty LCU");
  }
  PromptSpec spec;
  spec.instruction_text = kInstruction;
  spec.parameter_examples = examples;
  spec.output_constraint_text = kOutputConstraint;
  spec.member_ids = lcu.member_ids;
  spec.lcu_logs.reserve(lcu.member_ids.size());
  for (LineId id : lcu.member_ids) {
    spec.lcu_logs.push_back(logs.at(id).content);
  }
  return spec;
}

}  // namespace lunar
