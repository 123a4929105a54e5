#include "lunar/sharder.hpp"

#include <algorithm>
#include <unordered_set>

namespace lunar {

ShardIndex shard_by_length(const LogSet& logs) {
  ShardIndex index;
  for (const auto& rec : logs.records) {
    const std::size_t len = rec.tokens.size();
    if (len == 0) continue;  // blank content carries no template
    auto& group = index.groups[len];
    if (group.buckets.empty()) {
      group.token_count = len;
      group.buckets.push_back(Bucket{});
    }
    group.buckets.front().member_ids.push_back(rec.line_id);
  }
  return index;
}

std::unordered_map<std::string, std::size_t> token_frequencies(
    const LogSet& logs, const std::vector<LineId>& members) {
  std::unordered_map<std::string, std::size_t> freq;
  std::unordered_set<std::string_view> seen;
  for (LineId id : members) {
    seen.clear();
    for (const auto& token : logs.at(id).tokens) {
      if (seen.insert(token).second) ++freq[token];
    }
  }
  return freq;
}

TokenSignature top_k_signature(
    const LogRecord& record,
    const std::unordered_map<std::string, std::size_t>& freq, std::size_t k) {
  struct Ranked {
    std::string_view token;
    std::size_t count;
    std::size_t first_pos;
  };
  std::vector<Ranked> distinct;
  std::unordered_set<std::string_view> seen;
  for (std::size_t pos = 0; pos < record.tokens.size(); ++pos) {
    const std::string& token = record.tokens[pos];
    if (!seen.insert(token).second) continue;
    const auto it = freq.find(token);
    distinct.push_back(
        Ranked{token, it == freq.end() ? 0 : it->second, pos});
  }
  std::sort(distinct.begin(), distinct.end(), [](const Ranked& a, const Ranked& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.first_pos < b.first_pos;
  });
  TokenSignature sig;
  const std::size_t take = std::min(k, distinct.size());
  sig.reserve(take);
  for (std::size_t i = 0; i < take; ++i) sig.emplace_back(distinct[i].token);
  return sig;
}

namespace {

struct Cluster {
  TokenSignature key;
  std::vector<LineId> members;
};

bool key_less(const TokenSignature& a, const TokenSignature& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

TokenSignature prefix_of(const TokenSignature& key, std::size_t len) {
  if (key.size() <= len) return key;
  return TokenSignature(key.begin(), key.begin() + static_cast<long>(len));
}

}  // namespace

std::vector<Bucket> agglomerative_cluster(const LogSet& logs,
                                          const LengthGroup& group,
                                          std::size_t k, std::size_t max_bucket,
                                          MergeTrace* trace) {
  std::vector<LineId> members;
  for (const auto& b : group.buckets) {
    members.insert(members.end(), b.member_ids.begin(), b.member_ids.end());
  }
  std::sort(members.begin(), members.end());

  const auto freq = token_frequencies(logs, members);

  // Singleton clusters keyed by the full top-k signature.
  std::map<TokenSignature, std::vector<LineId>> initial;
  for (LineId id : members) {
    initial[top_k_signature(logs.at(id), freq, k)].push_back(id);
  }
  std::vector<Cluster> active;
  active.reserve(initial.size());
  for (auto& [key, ids] : initial) {
    active.push_back(Cluster{key, std::move(ids)});
  }

  std::vector<Bucket> frozen;
  auto freeze_oversized = [&] {
    auto it = std::stable_partition(
        active.begin(), active.end(),
        [max_bucket](const Cluster& c) { return c.members.size() <= max_bucket; });
    for (auto f = it; f != active.end(); ++f) {
      frozen.push_back(Bucket{std::move(f->key), std::move(f->members)});
    }
    active.erase(it, active.end());
  };

  // One merge round per prefix length, from k-1 down to 1. Oversized
  // clusters are frozen at the start of each round and never merge again.
  for (std::size_t prefix = k; prefix-- > 1 && !active.empty();) {
    freeze_oversized();
    std::map<TokenSignature, std::vector<std::size_t>> by_prefix;
    for (std::size_t i = 0; i < active.size(); ++i) {
      by_prefix[prefix_of(active[i].key, prefix)].push_back(i);
    }
    std::vector<Cluster> next;
    next.reserve(by_prefix.size());
    for (auto& [key, indices] : by_prefix) {
      if (indices.size() == 1) {
        next.push_back(std::move(active[indices.front()]));
        continue;
      }
      Cluster merged;
      merged.key = key;
      if (trace) {
        MergeTrace::Event ev;
        ev.prefix_len = prefix;
        for (std::size_t i : indices) {
          ev.child_sizes.push_back(active[i].members.size());
        }
        trace->events.push_back(std::move(ev));
      }
      for (std::size_t i : indices) {
        merged.members.insert(merged.members.end(),
                              active[i].members.begin(),
                              active[i].members.end());
      }
      std::sort(merged.members.begin(), merged.members.end());
      next.push_back(std::move(merged));
    }
    active = std::move(next);
  }

  for (auto& c : active) {
    frozen.push_back(Bucket{std::move(c.key), std::move(c.members)});
  }
  std::stable_sort(frozen.begin(), frozen.end(),
                   [](const Bucket& a, const Bucket& b) {
                     return key_less(a.signature, b.signature);
                   });
  return frozen;
}

ShardIndex build_shard_index(const LogSet& logs, std::size_t k,
                             std::size_t max_bucket) {
  ShardIndex index = shard_by_length(logs);
  for (auto& [len, group] : index.groups) {
    LengthGroup clustered;
    clustered.token_count = len;
    clustered.buckets = agglomerative_cluster(logs, group, k, max_bucket);
    group = std::move(clustered);
  }
  return index;
}

}  // namespace lunar
