#include "lunar/lcu_selector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace lunar {
namespace {

std::set<std::string> token_set(const LogRecord& r) {
  return {r.tokens.begin(), r.tokens.end()};
}

// Unordered pairs in a fixed order: (0,1), (0,2), ..., (1,2), ...
template <typename Fn>
void for_each_pair(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) fn(i, j);
  }
}

}  // namespace

double jaccard(const LogRecord& a, const LogRecord& b) {
  const auto sa = token_set(a);
  const auto sb = token_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<LineId> stratified_pool(const LogSet& logs, LineId anchor,
                                    const Bucket& bucket,
                                    const SelectorConfig& cfg, Rng& rng) {
  const LogRecord& anchor_rec = logs.at(anchor);

  // Similarity level -> candidate ids, deduplicated by content so the pool
  // never offers two interchangeable members.
  std::map<double, std::vector<LineId>, std::greater<>> levels;
  std::set<std::string> seen_content{anchor_rec.content};
  for (LineId id : bucket.member_ids) {
    if (id == anchor) continue;
    const LogRecord& rec = logs.at(id);
    if (!seen_content.insert(rec.content).second) continue;
    const double sim = jaccard(anchor_rec, rec);
    if (sim < cfg.min_similarity || sim == 1.0) continue;
    levels[sim].push_back(id);
  }

  std::vector<LineId> pool;
  for (auto& [sim, ids] : levels) {
    if (ids.size() > cfg.pool_per_level) {
      // Partial Fisher-Yates: the first pool_per_level slots end up holding
      // a uniform sample.
      for (std::size_t i = 0; i < cfg.pool_per_level; ++i) {
        const std::size_t j = i + rng.below(ids.size() - i);
        std::swap(ids[i], ids[j]);
      }
      ids.resize(cfg.pool_per_level);
      std::sort(ids.begin(), ids.end());
    }
    pool.insert(pool.end(), ids.begin(), ids.end());
  }
  return pool;
}

std::vector<CandidateLcu> enumerate_candidates(const LogSet& logs,
                                               LineId anchor,
                                               const std::vector<LineId>& pool,
                                               std::size_t m) {
  const std::size_t take = m > 0 ? m - 1 : 0;
  std::vector<std::vector<LineId>> subsets;
  if (pool.size() <= take) {
    subsets.push_back(pool);
  } else {
    // Fixed-size subsets in pool order via an index odometer.
    std::vector<std::size_t> idx(take);
    for (std::size_t i = 0; i < take; ++i) idx[i] = i;
    while (true) {
      std::vector<LineId> subset;
      subset.reserve(take);
      for (std::size_t i : idx) subset.push_back(pool[i]);
      subsets.push_back(std::move(subset));

      std::size_t pos = take;
      while (pos > 0 && idx[pos - 1] == pool.size() - (take - pos) - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < take; ++i) idx[i] = idx[i - 1] + 1;
    }
  }

  std::vector<CandidateLcu> candidates;
  candidates.reserve(subsets.size());
  for (auto& subset : subsets) {
    CandidateLcu c;
    c.member_ids.reserve(subset.size() + 1);
    c.member_ids.push_back(anchor);
    std::sort(subset.begin(), subset.end());
    c.member_ids.insert(c.member_ids.end(), subset.begin(), subset.end());
    for_each_pair(c.member_ids.size(), [&](std::size_t i, std::size_t j) {
      LineId a = c.member_ids[i];
      LineId b = c.member_ids[j];
      if (a > b) std::swap(a, b);
      c.pair_sims.push_back({a, b, jaccard(logs.at(a), logs.at(b))});
    });
    candidates.push_back(std::move(c));
  }
  return candidates;
}

double variability_score(const CandidateLcu& c) {
  if (c.member_ids.size() < 2) return 0.0;
  double sum = 0.0;
  for (const PairSim& p : c.pair_sims) sum += 1.0 - p.sim;
  return sum / static_cast<double>(c.pair_sims.size());
}

double commonality_score(const CandidateLcu& c) {
  const std::size_t n = c.pair_sims.size();
  if (n < 2) return 1.0;
  double sum = 0.0;
  std::size_t count = 0;
  for_each_pair(n, [&](std::size_t i, std::size_t j) {
    sum += 1.0 - std::abs(c.pair_sims[i].sim - c.pair_sims[j].sim);
    ++count;
  });
  return sum / static_cast<double>(count);
}

double hybrid_score(double variability, double commonality, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw ConfigError("lambda must lie in [0, 1]");
  }
  return lambda * variability + (1.0 - lambda) * commonality;
}

double score_candidate(CandidateLcu& c, double lambda) {
  c.score = hybrid_score(variability_score(c), commonality_score(c), lambda);
  return c.score;
}

CandidateLcu select_lcu(const LogSet& logs, const Bucket& bucket,
                        const SelectorConfig& cfg, std::uint64_t rng_seed) {
  if (bucket.member_ids.empty()) {
    throw InputError("cannot select an LCU from an empty bucket");
  }
  Rng rng(rng_seed);
  const LineId anchor = bucket.member_ids[rng.below(bucket.member_ids.size())];

  const std::vector<LineId> pool =
      stratified_pool(logs, anchor, bucket, cfg, rng);
  std::vector<CandidateLcu> candidates =
      enumerate_candidates(logs, anchor, pool, cfg.lcu_size);

  // An empty pool still yields the anchor-only candidate, so candidates is
  // never empty.
  CandidateLcu* best = nullptr;
  for (CandidateLcu& c : candidates) {
    score_candidate(c, cfg.lambda);
    if (best == nullptr || c.score > best->score ||
        (c.score == best->score && c.member_ids < best->member_ids)) {
      best = &c;
    }
  }
  return std::move(*best);
}

}  // namespace lunar
