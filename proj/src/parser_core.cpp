#include "lunar/parser_core.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "lunar/csv.hpp"
#include "lunar/matcher.hpp"
#include "lunar/rng.hpp"
#include "lunar/template_ops.hpp"

namespace lunar {

TemplateId TemplateStore::intern(const Template& t) {
  auto it = index_.find(t.tokens);
  if (it != index_.end()) return it->second;
  const TemplateId id = static_cast<TemplateId>(templates_.size());
  templates_.push_back(t);
  matched_.push_back(0);
  index_.emplace(t.tokens, id);
  return id;
}

std::size_t apply_template(const Template& t, const LogSet& logs,
                           LengthGroup& group, TemplateStore& store,
                           std::vector<std::pair<LineId, TemplateId>>& out) {
  std::vector<LineId> matched;
  for (Bucket& bucket : group.buckets) {
    auto split = std::stable_partition(
        bucket.member_ids.begin(), bucket.member_ids.end(),
        [&](LineId id) { return !match(t, logs.at(id)); });
    matched.insert(matched.end(), split, bucket.member_ids.end());
    bucket.member_ids.erase(split, bucket.member_ids.end());
  }
  std::erase_if(group.buckets,
                [](const Bucket& b) { return b.member_ids.empty(); });

  if (matched.empty()) return 0;
  const TemplateId id = store.intern(t);
  store.add_matches(id, matched.size());
  for (LineId line : matched) out.emplace_back(line, id);
  return matched.size();
}

namespace {

Template verbatim_template(const LogRecord& record) {
  Template t;
  t.tokens = record.tokens;
  return t;
}

// Index of the bucket with the most unparsed logs; ties go to the earliest,
// which is the lexicographically smallest signature since buckets stay
// signature-sorted.
std::size_t fullest_bucket(const LengthGroup& group) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < group.buckets.size(); ++i) {
    if (group.buckets[i].member_ids.size() >
        group.buckets[best].member_ids.size()) {
      best = i;
    }
  }
  return best;
}

}  // namespace

GroupResult parse_group(const LogSet& logs, const LengthGroup& group,
                        const ParserConfig& cfg, Backend& backend,
                        std::uint64_t group_seed) {
  GroupResult result;
  result.token_count = group.token_count;

  LengthGroup work = group;
  std::uint64_t iteration = 0;
  while (!work.buckets.empty()) {
    const Bucket& bucket = work.buckets[fullest_bucket(work)];
    const std::uint64_t iter_seed = mix_seed(group_seed, iteration++);
    ++result.stats.iterations;

    const CandidateLcu lcu = select_lcu(logs, bucket, cfg.selector, iter_seed);
    const LineId anchor = lcu.member_ids.front();
    const PromptSpec prompt = build_prompt(lcu, logs, cfg.examples);

    Template tmpl;
    bool from_fallback = false;
    try {
      try {
        ++result.stats.queries;
        tmpl = aggregate_and_normalize(
            extract_templates(backend.query(prompt).text));
      } catch (const ExtractionError&) {
        ++result.stats.queries;
        ++result.stats.extraction_retries;
        tmpl = aggregate_and_normalize(
            extract_templates(backend.query(prompt).text));
      }
    } catch (const ExtractionError&) {
      tmpl = verbatim_template(logs.at(anchor));
      from_fallback = true;
      ++result.stats.fallbacks;
    } catch (const BackendError& e) {
      throw ParseRunError("length group " +
                          std::to_string(group.token_count) + ": " +
                          e.what());
    }

    std::size_t matched =
        apply_template(tmpl, logs, work, result.store, result.assignment);
    if (matched == 0) {
      // The model's template fit nothing; consume the anchor so the loop
      // always progresses. Its verbatim template matches at least itself.
      if (!from_fallback) ++result.stats.fallbacks;
      matched = apply_template(verbatim_template(logs.at(anchor)), logs, work,
                               result.store, result.assignment);
    }
  }
  return result;
}

namespace {

void write_partial(const std::string& path,
                   const std::map<std::size_t, GroupResult>& done) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) return;  // recovery is best-effort
  write_csv_row(out, {"LineId", "TemplateText"});
  for (const auto& [token_count, group] : done) {
    for (const auto& [line, local_id] : group.assignment) {
      write_csv_row(out, {std::to_string(line),
                          group.store.at(local_id).text()});
    }
  }
}

}  // namespace

ParseResult parse_all(const LogSet& logs, const ShardIndex& index,
                      const ParserConfig& cfg, Backend& backend) {
  if (cfg.workers == 0) throw ConfigError("workers must be at least 1");

  std::vector<const LengthGroup*> groups;
  groups.reserve(index.groups.size());
  for (const auto& [token_count, group] : index.groups) {
    groups.push_back(&group);
  }

  std::map<std::size_t, GroupResult> done;
  std::mutex done_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= groups.size() || abort.load()) return;
      const LengthGroup& group = *groups[i];
      try {
        GroupResult r = parse_group(logs, group, cfg, backend,
                                    mix_seed(cfg.seed, group.token_count));
        std::lock_guard lock(done_mutex);
        done.emplace(group.token_count, std::move(r));
      } catch (...) {
        std::lock_guard lock(done_mutex);
        if (!first_error) first_error = std::current_exception();
        abort.store(true);
        return;
      }
    }
  };

  const std::size_t pool_size = std::min(cfg.workers, groups.size());
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  if (first_error) {
    write_partial(cfg.recovery_path, done);
    std::rethrow_exception(first_error);
  }

  // Merge in ascending token-count order: global ids follow each group's
  // local registration order, independent of scheduling.
  ParseResult result;
  result.line_to_template.assign(logs.size(), kUnassigned);
  for (auto& [token_count, group] : done) {
    std::vector<TemplateId> remap(group.store.size());
    for (TemplateId local = 0; local < group.store.size(); ++local) {
      const TemplateId global = result.store.intern(group.store.at(local));
      result.store.add_matches(global, group.store.matched(local));
      remap[local] = global;
    }
    for (const auto& [line, local_id] : group.assignment) {
      result.line_to_template[line] = remap[local_id];
    }
    result.stats.iterations += group.stats.iterations;
    result.stats.queries += group.stats.queries;
    result.stats.extraction_retries += group.stats.extraction_retries;
    result.stats.fallbacks += group.stats.fallbacks;
  }
  return result;
}

void write_assignments(const std::string& path, const ParseResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write assignments to " + path);
  write_csv_row(out, {"LineId", "TemplateId", "TemplateText"});
  for (LineId line = 0; line < result.line_to_template.size(); ++line) {
    const TemplateId id = result.line_to_template[line];
    write_csv_row(out, {std::to_string(line), std::to_string(id),
                        result.store.at(id).text()});
  }
}

void write_templates(const std::string& path, const TemplateStore& store) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write templates to " + path);
  write_csv_row(out, {"TemplateId", "TemplateText", "MatchCount"});
  for (TemplateId id = 0; id < store.size(); ++id) {
    write_csv_row(out, {std::to_string(id), store.at(id).text(),
                        std::to_string(store.matched(id))});
  }
}

}  // namespace lunar
