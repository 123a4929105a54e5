#include "lunar/backend.hpp"

#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "lunar/rng.hpp"

namespace lunar {
namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

MockBackend::MockBackend(std::unordered_map<LineId, std::string> oracle,
                         MockOptions options)
    : oracle_(std::move(oracle)), options_(options) {}

bool MockBackend::should_corrupt(const std::string& rendered) const {
  if (options_.corruption_rate <= 0.0) return false;
  const std::uint64_t h = mix_seed(options_.corruption_seed, fnv1a(rendered));
  const double unit =
      static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
  return unit < options_.corruption_rate;
}

RawResponse MockBackend::query(const PromptSpec& prompt) {
  queries_.fetch_add(1);
  if (options_.latency.count() > 0) {
    std::this_thread::sleep_for(options_.latency);
  }
  if (should_corrupt(prompt.render())) {
    corrupted_.fetch_add(1);
    return {"I could not determine a reliable template for these logs; "
            "they look too heterogeneous to abstract.",
            std::nullopt};
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < prompt.member_ids.size(); ++i) {
    const LineId id = prompt.member_ids[i];
    auto it = oracle_.find(id);
    if (it == oracle_.end()) {
      throw BackendError("mock oracle has no template for line " +
                         std::to_string(id));
    }
    out << "LogTemplate[" << (i + 1) << "]: `" << it->second << "`\n";
  }
  return {out.str(), TokenUsage{0, 0}};
}

namespace {

// Splits "scheme://host[:port]/path" into the client base and request path.
void split_endpoint(const std::string& endpoint, std::string& base,
                    std::string& path) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must include a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    base = endpoint;
    path = "/";
  } else {
    base = endpoint.substr(0, path_start);
    path = endpoint.substr(path_start);
  }
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpBackend::HttpBackend(BackendConfig cfg)
    : cfg_(std::move(cfg)),
      slots_(static_cast<std::ptrdiff_t>(
          cfg_.max_in_flight > 0 ? cfg_.max_in_flight : 1)) {
  if (cfg_.endpoint.empty()) {
    throw ConfigError("http backend requires an endpoint");
  }
  split_endpoint(cfg_.endpoint, base_url_, path_);
}

RawResponse HttpBackend::query(const PromptSpec& prompt) {
  nlohmann::json body = {
      {"model", cfg_.model_name},
      {"temperature", cfg_.temperature},
      {"messages",
       nlohmann::json::array(
           {{{"role", "user"}, {"content", prompt.render()}}})},
  };
  const std::string payload = body.dump();

  slots_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{slots_};

  std::string last_error;
  for (std::size_t attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(cfg_.backoff_base * (1u << (attempt - 1)));
    }

    httplib::Client client(base_url_);
    client.set_connection_timeout(
        std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
    client.set_read_timeout(
        std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + cfg_.api_key);
    }

    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "http status " + std::to_string(res->status);
      if (retryable_status(res->status)) continue;
      throw BackendError(last_error + ": " + res->body);
    }

    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(std::string("malformed backend response: ") +
                         e.what());
    }
    if (!doc.contains("choices") || !doc["choices"].is_array() ||
        doc["choices"].empty()) {
      throw BackendError("backend response has no choices");
    }
    RawResponse out;
    out.text = doc["choices"][0]["message"]["content"].get<std::string>();
    if (doc.contains("usage") && doc["usage"].is_object()) {
      TokenUsage usage;
      usage.prompt_tokens = doc["usage"].value("prompt_tokens", 0ull);
      usage.completion_tokens = doc["usage"].value("completion_tokens", 0ull);
      out.usage = usage;
    }
    return out;
  }
  throw BackendError("backend retries exhausted; last error: " + last_error);
}

}  // namespace lunar
