#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tropescope/fetch.hpp"
#include "tropescope/model.hpp"
#include "tropescope/parse.hpp"

namespace tropescope {

struct CrawlLimits {
  std::optional<std::size_t> max_pages;
  std::optional<std::size_t> max_depth;  // seeds sit at depth 0
  /// Namespaces eligible for enqueueing; empty means the film and trope
  /// namespaces. Pagination pages are eligible when their owner is.
  std::set<std::string> scope;
};

/// Which discovery perspectives contribute relations. All on by default;
/// turning some off reproduces a film-pages-only crawl.
struct Perspectives {
  bool film_pages = true;
  bool trope_pages = true;
  bool pagination_pages = true;
};

struct CrawlOptions {
  WikiScheme scheme;
  CrawlLimits limits;
  std::size_t workers = 4;
  Date captured_at{std::chrono::year{1970}, std::chrono::January, std::chrono::day{1}};
  Perspectives perspectives;
  /// Called after every merged page with (pages done, frontier size).
  std::function<void(std::size_t, std::size_t)> progress;
};

struct CrawlReport {
  std::size_t pages_fetched = 0;
  std::size_t pages_not_found = 0;
  std::size_t pages_failed = 0;
  std::size_t relations_found = 0;
  std::size_t films_discovered = 0;
  std::size_t tropes_discovered = 0;
  std::vector<std::string> failed_urls;
  std::vector<std::string> diagnostics;
};

/// Breadth-first crawl from `seeds`. Each level is sorted, fetched by up to
/// `options.workers` threads, then classified and merged in order by the
/// calling thread, so the result does not depend on the worker count.
/// Throws EmptyCrawl when no seed could be retrieved.
std::pair<BipartiteSnapshot, CrawlReport> crawl(PageSource& source, const std::vector<EntityKey>& seeds,
                                                const CrawlOptions& options);

std::pair<BipartiteSnapshot, CrawlReport> crawl(const SourceConfig& config, const std::vector<EntityKey>& seeds,
                                                const CrawlOptions& options);

/// Crawls the same fixture twice and compares the serialized snapshots.
bool recrawl_idempotence_check(const SourceConfig& config, const std::vector<EntityKey>& seeds,
                               const CrawlOptions& options);

}  // namespace tropescope
