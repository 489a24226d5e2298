#include "tropescope/fetch.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "tropescope/error.hpp"
#include "tropescope/model.hpp"

namespace tropescope {

namespace {

std::optional<std::string> read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Canonical "Namespace/Title" when the URL is a wiki page, else nullopt.
std::optional<std::string> canonical_path(const std::string& url) {
  try {
    return canonicalize_url(url).str();
  } catch (const NotAWikiPage&) {
  }
  if (!url.empty() && url.front() != '/' && url.find("://") == std::string::npos) {
    try {
      return EntityKey::parse(url).str();
    } catch (const std::invalid_argument&) {
    }
  }
  return std::nullopt;
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string host;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("not an absolute URL: " + url);
  const auto path = url.find('/', scheme + 3);
  SplitUrl out;
  out.origin = url.substr(0, path);
  out.path = path == std::string::npos ? "/" : url.substr(path);
  out.host = url.substr(scheme + 3, (path == std::string::npos ? url.size() : path) - scheme - 3);
  return out;
}

void sleep_seconds(double seconds) {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

}  // namespace

void SourceConfig::validate() const {
  if (!(min_interval >= 0)) throw ConfigError("min_interval must be >= 0");
  if (max_retries < 0 || max_retries > 10) throw ConfigError("max_retries must be in [0, 10]");
  if (!(backoff_base >= 0)) throw ConfigError("backoff_base must be >= 0");
  if (!(timeout > 0)) throw ConfigError("timeout must be > 0");
  if (const auto* live = std::get_if<LiveMode>(&mode)) {
    if (!live->base_url.starts_with("http://") && !live->base_url.starts_with("https://")) {
      throw ConfigError("base_url must start with http:// or https://");
    }
  }
}

std::string lossy_utf8(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  const auto cont = [&](std::size_t i) {
    return i < bytes.size() && (static_cast<unsigned char>(bytes[i]) & 0xC0) == 0x80;
  };
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = cont(i + 1) ? 2 : 0;
    } else if (c >= 0xE0 && c <= 0xEF) {
      const auto c1 = i + 1 < bytes.size() ? static_cast<unsigned char>(bytes[i + 1]) : 0;
      const bool first_ok = (c == 0xE0)   ? (c1 >= 0xA0 && c1 <= 0xBF)
                            : (c == 0xED) ? (c1 >= 0x80 && c1 <= 0x9F)
                                          : cont(i + 1);
      len = first_ok && cont(i + 2) ? 3 : 0;
    } else if (c >= 0xF0 && c <= 0xF4) {
      const auto c1 = i + 1 < bytes.size() ? static_cast<unsigned char>(bytes[i + 1]) : 0;
      const bool first_ok = (c == 0xF0)   ? (c1 >= 0x90 && c1 <= 0xBF)
                            : (c == 0xF4) ? (c1 >= 0x80 && c1 <= 0x8F)
                                          : cont(i + 1);
      len = first_ok && cont(i + 2) && cont(i + 3) ? 4 : 0;
    }
    if (len == 0) {
      out += kReplacement;
      ++i;
    } else {
      out.append(bytes.substr(i, len));
      i += len;
    }
  }
  return out;
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// ---------------------------------------------------------------------------

FixtureSource::FixtureSource(std::filesystem::path directory) : directory_(std::move(directory)) {
  const auto index_path = directory_ / "index.json";
  const auto text = read_text(index_path);
  if (!text) throw ConfigError("cannot read fixture index " + index_path.string());
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(*text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed fixture index " + index_path.string() + ": " + e.what());
  }
  if (!index.is_object()) throw ConfigError("fixture index must be an object");
  for (const auto& [key, file] : index.items()) {
    if (!file.is_string()) throw ConfigError("fixture index entry '" + key + "' must map to a file name");
    try {
      index_.emplace(EntityKey::parse(key).str(), file.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("fixture index: ") + e.what());
    }
  }
}

FetchResult FixtureSource::fetch(const std::string& url) {
  FetchResult result;
  result.url = url;
  const auto path = canonical_path(url);
  const auto it = path ? index_.find(*path) : index_.end();
  if (it == index_.end()) {
    result.status = FetchStatus::NotFound;
    return result;
  }
  const auto text = read_text(directory_ / it->second);
  if (!text) {
    result.status = FetchStatus::TransientFailure;
    result.body = "fixture file missing: " + it->second;
    return result;
  }
  result.status = FetchStatus::Ok;
  result.body = lossy_utf8(*text);
  return result;
}

// ---------------------------------------------------------------------------

HostRateLimiter::HostRateLimiter(double min_interval_seconds)
    : interval_(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(min_interval_seconds))) {}

HostRateLimiter::Clock::time_point HostRateLimiter::acquire(const std::string& host) {
  Clock::time_point start;
  {
    std::lock_guard lock(mutex_);
    const auto now = Clock::now();
    auto [it, inserted] = next_slot_.try_emplace(host, now);
    start = std::max(now, it->second);
    it->second = start + interval_;
  }
  std::this_thread::sleep_until(start);
  return start;
}

// ---------------------------------------------------------------------------

PageCache::PageCache(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw ConfigError("cannot create cache directory " + directory_.string() + ": " + ec.message());
}

std::string PageCache::key_for(const std::string& url) {
  std::string basis = canonical_path(url).value_or(url);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(stable_hash(basis)));
  return buf;
}

std::optional<std::string> PageCache::get(const std::string& url) const {
  std::lock_guard lock(mutex_);
  return read_text(directory_ / (key_for(url) + ".html"));
}

void PageCache::put(const std::string& url, std::string_view body) {
  const std::string key = key_for(url);
  std::lock_guard lock(mutex_);
  {
    std::ofstream out(directory_ / (key + ".html"), std::ios::binary | std::ios::trunc);
    out << body;
  }
  const auto manifest_path = directory_ / "manifest.json";
  nlohmann::json manifest = nlohmann::json::object();
  if (const auto text = read_text(manifest_path)) {
    manifest = nlohmann::json::parse(*text, nullptr, false);
    if (!manifest.is_object()) manifest = nlohmann::json::object();
  }
  manifest[key] = url;
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

LiveSource::LiveSource(SourceConfig config)
    : config_(std::move(config)), limiter_(config_.min_interval) {
  config_.validate();
  const auto* live = std::get_if<LiveMode>(&config_.mode);
  if (live == nullptr) throw ConfigError("LiveSource needs a live-mode configuration");
  base_url_ = live->base_url;
  while (base_url_.ends_with('/')) base_url_.pop_back();
  if (config_.cache_dir) cache_.emplace(*config_.cache_dir);
}

std::size_t LiveSource::requests_sent() const noexcept {
  std::lock_guard lock(stats_mutex_);
  return requests_sent_;
}

FetchResult LiveSource::fetch(const std::string& url) {
  FetchResult result;
  result.url = url;
  if (cache_) {
    if (auto body = cache_->get(url)) {
      result.status = FetchStatus::Ok;
      result.body = lossy_utf8(*body);
      result.from_cache = true;
      return result;
    }
  }

  const std::string absolute = url.find("://") != std::string::npos
                                   ? url
                                   : base_url_ + (url.starts_with('/') ? "" : "/") + url;
  SplitUrl target;
  try {
    target = split_url(absolute);
  } catch (const ConfigError& e) {
    result.status = FetchStatus::TransientFailure;
    result.body = e.what();
    return result;
  }

  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeout));
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) sleep_seconds(config_.backoff_base * std::pow(2.0, attempt - 1));
    limiter_.acquire(target.host);
    {
      std::lock_guard lock(stats_mutex_);
      ++requests_sent_;
    }
    httplib::Client client(target.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    const httplib::Headers headers{{"User-Agent", config_.user_agent}};
    const auto response = client.Get(target.path, headers);
    if (!response) {
      last_error = "transport error: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status == 404 || response->status == 410) {
      result.status = FetchStatus::NotFound;
      return result;
    }
    if (response->status >= 200 && response->status < 300) {
      result.status = FetchStatus::Ok;
      result.body = lossy_utf8(response->body);
      if (cache_) cache_->put(url, result.body);
      return result;
    }
    last_error = "HTTP " + std::to_string(response->status);
    if (response->status < 500) break;  // other 4xx are not worth retrying
  }
  result.status = FetchStatus::TransientFailure;
  result.body = last_error;
  return result;
}

std::unique_ptr<PageSource> make_source(const SourceConfig& config) {
  config.validate();
  if (const auto* fixture = std::get_if<FixtureMode>(&config.mode)) {
    return std::make_unique<FixtureSource>(fixture->directory);
  }
  return std::make_unique<LiveSource>(config);
}

FetchResult fetch(const SourceConfig& config, const std::string& url) {
  return make_source(config)->fetch(url);
}

}  // namespace tropescope
