#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace tropescope {

struct LiveMode {
  std::string base_url;  // e.g. "https://tvtropes.org"
};

struct FixtureMode {
  std::filesystem::path directory;  // holds index.json
};

struct SourceConfig {
  std::variant<LiveMode, FixtureMode> mode = FixtureMode{};
  double min_interval = 1.0;  // seconds between requests to one host
  int max_retries = 3;
  double backoff_base = 0.5;  // seconds; attempt k waits backoff_base * 2^k
  std::optional<std::filesystem::path> cache_dir;
  std::string user_agent = "tropescope/0.1";
  double timeout = 30.0;  // seconds, connect and read

  /// Throws ConfigError.
  void validate() const;
};

enum class FetchStatus { Ok, NotFound, TransientFailure };

struct FetchResult {
  std::string url;
  FetchStatus status = FetchStatus::TransientFailure;
  std::string body;  // html text when Ok, failure detail when TransientFailure
  bool from_cache = false;

  [[nodiscard]] bool ok() const noexcept { return status == FetchStatus::Ok; }
};

class PageSource {
 public:
  virtual ~PageSource() = default;
  /// Safe to call from several threads at once.
  virtual FetchResult fetch(const std::string& url) = 0;
};

/// Offline source backed by a directory with an `index.json` that maps
/// "Namespace/Title" to HTML file names relative to the directory.
class FixtureSource final : public PageSource {
 public:
  /// Throws ConfigError when the directory or its index is unusable.
  explicit FixtureSource(std::filesystem::path directory);

  FetchResult fetch(const std::string& url) override;

  [[nodiscard]] std::size_t page_count() const noexcept { return index_.size(); }

 private:
  std::filesystem::path directory_;
  std::map<std::string, std::string> index_;
};

/// Serializes request start times per host: consecutive starts on the same
/// host are at least `min_interval` apart, across all calling threads.
class HostRateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit HostRateLimiter(double min_interval_seconds);

  /// Blocks until the caller may start a request to `host`; returns the
  /// reserved start time.
  Clock::time_point acquire(const std::string& host);

 private:
  Clock::duration interval_;
  std::mutex mutex_;
  std::map<std::string, Clock::time_point> next_slot_;
};

/// On-disk page cache: one file per URL, named by a stable hash of the
/// canonical path, plus `manifest.json` mapping hash -> URL.
class PageCache {
 public:
  explicit PageCache(std::filesystem::path directory);

  std::optional<std::string> get(const std::string& url) const;
  void put(const std::string& url, std::string_view body);

  [[nodiscard]] static std::string key_for(const std::string& url);

 private:
  std::filesystem::path directory_;
  mutable std::mutex mutex_;
};

/// HTTP source with per-host politeness, retry with exponential backoff on
/// 5xx and transport errors, and an optional page cache.
class LiveSource final : public PageSource {
 public:
  explicit LiveSource(SourceConfig config);

  FetchResult fetch(const std::string& url) override;

  /// Number of HTTP requests actually sent (cache hits excluded).
  [[nodiscard]] std::size_t requests_sent() const noexcept;

 private:
  SourceConfig config_;
  std::string base_url_;
  HostRateLimiter limiter_;
  std::optional<PageCache> cache_;
  mutable std::mutex stats_mutex_;
  std::size_t requests_sent_ = 0;
};

std::unique_ptr<PageSource> make_source(const SourceConfig& config);

/// One-shot convenience wrapper; rate limiting and caching only span this
/// single call, so crawls should hold a PageSource instead.
FetchResult fetch(const SourceConfig& config, const std::string& url);

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string lossy_utf8(std::string_view bytes);

/// FNV-1a, 64 bit.
std::uint64_t stable_hash(std::string_view text);

}  // namespace tropescope
