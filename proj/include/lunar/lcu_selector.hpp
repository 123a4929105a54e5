#pragma once

#include <cstdint>
#include <vector>

#include "lunar/core.hpp"
#include "lunar/rng.hpp"
#include "lunar/sharder.hpp"

namespace lunar {

struct SelectorConfig {
  std::size_t lcu_size = 3;      // m
  double min_similarity = 0.33;  // s
  double lambda = 0.7;
  std::size_t pool_per_level = 3;  // defaults to lcu_size
};

struct PairSim {
  LineId a = 0;  // a < b
  LineId b = 0;
  double sim = 0.0;
};

/// An anchor log plus up to m-1 companions, with cached pairwise Jaccard
/// similarities and the hybrid selection score.
struct CandidateLcu {
  std::vector<LineId> member_ids;  // anchor first, companions ascending
  std::vector<PairSim> pair_sims;  // every unordered member pair
  double score = 0.0;
};

/// Jaccard similarity over whitespace token sets. Multiplicity is ignored;
/// two empty token sets compare as 1.0.
double jaccard(const LogRecord& a, const LogRecord& b);

/// Candidate pool around the anchor: bucket mates with similarity below
/// min_similarity or equal to 1.0 are dropped, survivors are grouped by
/// exact similarity value, and up to pool_per_level are drawn per level
/// (levels in descending similarity, picks in ascending line_id).
std::vector<LineId> stratified_pool(const LogSet& logs, LineId anchor,
                                    const Bucket& bucket,
                                    const SelectorConfig& cfg, Rng& rng);

/// One candidate per (m-1)-subset of the pool, anchor always included.
/// A pool smaller than m-1 yields the single candidate anchor + pool.
std::vector<CandidateLcu> enumerate_candidates(const LogSet& logs,
                                               LineId anchor,
                                               const std::vector<LineId>& pool,
                                               std::size_t m);

/// Mean pairwise Jaccard distance; 0 for fewer than two members.
double variability_score(const CandidateLcu& c);

/// Mean of (1 - |JS_i - JS_j|) over all pairs of member pairs; 1.0 when
/// fewer than two pairs exist.
double commonality_score(const CandidateLcu& c);

/// lambda * variability + (1 - lambda) * commonality.
/// Throws ConfigError when lambda is outside [0, 1].
double hybrid_score(double variability, double commonality, double lambda);

/// Computes the candidate's hybrid score and stores it in `score`.
double score_candidate(CandidateLcu& c, double lambda);

/// Draws a seeded anchor, builds the pool, enumerates and scores candidates,
/// and returns the argmax. Ties break toward the lexicographically smallest
/// member id list.
CandidateLcu select_lcu(const LogSet& logs, const Bucket& bucket,
                        const SelectorConfig& cfg, std::uint64_t rng_seed);

}  // namespace lunar
