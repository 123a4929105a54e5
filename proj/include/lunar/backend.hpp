#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <unordered_map>

#include "lunar/core.hpp"
#include "lunar/prompt.hpp"

namespace lunar {

enum class BackendKind { kMock, kHttp };

struct BackendConfig {
  BackendKind kind = BackendKind::kMock;
  std::string endpoint;
  std::string model_name = "gpt-3.5-turbo";
  double temperature = 0.0;
  std::size_t max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds backoff_base{500};
  std::size_t max_in_flight = 8;
  std::string api_key;
};

struct TokenUsage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

struct RawResponse {
  std::string text;
  std::optional<TokenUsage> usage;
};

/// Model query interface. Implementations must be callable from multiple
/// worker threads simultaneously.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual RawResponse query(const PromptSpec& prompt) = 0;
};

struct MockOptions {
  std::chrono::milliseconds latency{0};
  /// Fraction of responses replaced by unparseable prose. The decision is a
  /// pure function of (prompt text, corruption_seed), so retrying the same
  /// prompt fails the same way.
  double corruption_rate = 0.0;
  std::uint64_t corruption_seed = 0;
};

/// Deterministic stand-in for a live model: answers each queried log with
/// its ground-truth template in the constrained response format.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::unordered_map<LineId, std::string> oracle,
                       MockOptions options = {});

  RawResponse query(const PromptSpec& prompt) override;

  std::uint64_t corrupted_count() const { return corrupted_.load(); }
  std::uint64_t query_count() const { return queries_.load(); }

 private:
  bool should_corrupt(const std::string& rendered) const;

  std::unordered_map<LineId, std::string> oracle_;
  MockOptions options_;
  std::atomic<std::uint64_t> corrupted_{0};
  std::atomic<std::uint64_t> queries_{0};
};

/// Chat-completion client: posts the rendered prompt as a single user
/// message, retries transient failures with exponential backoff, and caps
/// concurrent requests.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(BackendConfig cfg);

  RawResponse query(const PromptSpec& prompt) override;

 private:
  BackendConfig cfg_;
  std::string base_url_;
  std::string path_;
  std::counting_semaphore<> slots_;
};

}  // namespace lunar
