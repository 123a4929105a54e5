#include "lunar/template_ops.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "lunar/ingest.hpp"

namespace lunar {
namespace {

// Label, then the template between backticks on the same line.
const std::regex kLabeledTemplate{
    R"(LogTemplate\[[0-9]+\][^`\r\n]*`([^`]*)`)"};

// Innermost brace pair; applied to fixpoint so nesting collapses outward.
const std::regex kBraceSpan{R"(\{[^{}]*\})"};

}  // namespace

std::vector<std::string> extract_templates(const std::string& response_text) {
  std::vector<std::string> found;
  auto begin = std::sregex_iterator(response_text.begin(),
                                    response_text.end(), kLabeledTemplate);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    found.push_back((*it)[1].str());
  }
  if (found.empty()) {
    throw ExtractionError("response contains no labeled backticked template");
  }
  return found;
}

Template normalize_template_text(const std::string& raw) {
  const std::string placeholder(kPlaceholder);
  std::string text = raw;
  while (true) {
    std::string next = std::regex_replace(text, kBraceSpan, placeholder);
    if (next == text) break;
    text = std::move(next);
  }

  Template t;
  t.tokens = tokenize(text);
  for (std::string& token : t.tokens) {
    if (token.find(kPlaceholder) != std::string::npos) token = kPlaceholder;
  }
  return t;
}

Template aggregate_and_normalize(const std::vector<std::string>& raw) {
  if (raw.empty()) {
    throw InputError("cannot aggregate an empty template list");
  }
  // first_seen breaks frequency ties toward earlier appearance.
  struct Tally {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::map<std::string, Tally> tallies;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = tallies.try_emplace(raw[i], Tally{0, i});
    ++it->second.count;
  }
  const std::string* majority = nullptr;
  const Tally* best = nullptr;
  for (const auto& [text, tally] : tallies) {
    if (best == nullptr || tally.count > best->count ||
        (tally.count == best->count && tally.first_seen < best->first_seen)) {
      majority = &text;
      best = &tally;
    }
  }
  return normalize_template_text(*majority);
}

}  // namespace lunar
