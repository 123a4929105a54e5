#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lunar/core.hpp"

namespace lunar {

/// The record's tokens ranked by descending in-group frequency, ties broken
/// by earlier position in the log. At most k entries.
using TokenSignature = std::vector<std::string>;

struct Bucket {
  TokenSignature signature;
  std::vector<LineId> member_ids;  // ascending
};

struct LengthGroup {
  std::size_t token_count = 0;
  std::vector<Bucket> buckets;

  std::size_t log_count() const {
    std::size_t n = 0;
    for (const auto& b : buckets) n += b.member_ids.size();
    return n;
  }
};

/// Two-level shard hierarchy: token count -> length group -> buckets.
struct ShardIndex {
  std::map<std::size_t, LengthGroup> groups;
};

/// First-level sharding. Each group holds a single unsplit bucket with an
/// empty signature covering every record of that token count.
ShardIndex shard_by_length(const LogSet& logs);

/// Per-group token frequency: each log contributes one count per distinct
/// token it contains.
std::unordered_map<std::string, std::size_t> token_frequencies(
    const LogSet& logs, const std::vector<LineId>& members);

TokenSignature top_k_signature(
    const LogRecord& record,
    const std::unordered_map<std::string, std::size_t>& freq, std::size_t k);

/// Merge audit trail; each event records the sizes of the clusters combined
/// at a given prefix length.
struct MergeTrace {
  struct Event {
    std::size_t prefix_len;
    std::vector<std::size_t> child_sizes;
  };
  std::vector<Event> events;
};

/// Bottom-up clustering of one length group. Starts from clusters keyed by
/// the full top-k signature; each round freezes clusters larger than
/// max_bucket as standalone buckets, then merges the remainder by the
/// signature prefix one token shorter. Output buckets partition the group.
std::vector<Bucket> agglomerative_cluster(const LogSet& logs,
                                          const LengthGroup& group,
                                          std::size_t k, std::size_t max_bucket,
                                          MergeTrace* trace = nullptr);

/// shard_by_length followed by agglomerative_cluster on every group.
ShardIndex build_shard_index(const LogSet& logs, std::size_t k,
                             std::size_t max_bucket);

}  // namespace lunar
