#include "tropescope/crawl.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "tropescope/dataset.hpp"
#include "tropescope/error.hpp"

namespace tropescope {

namespace {

struct Fetched {
  FetchResult result;
  std::vector<EntityKey> links;
};

std::vector<Fetched> fetch_level(PageSource& source, const std::vector<EntityKey>& level, std::size_t workers,
                                 const std::string& article_id) {
  std::vector<Fetched> out(level.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= level.size()) return;
      const std::string url = wiki_path(level[i]);
      try {
        out[i].result = source.fetch(url);
        if (out[i].result.ok()) out[i].links = extract_wiki_links(out[i].result.body, article_id);
      } catch (const std::exception& e) {
        out[i].result = FetchResult{url, FetchStatus::TransientFailure, e.what(), false};
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), level.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return out;
}

bool wanted(const Perspectives& perspectives, EvidenceSource source) {
  switch (source) {
    case EvidenceSource::FilmPage:
      return perspectives.film_pages;
    case EvidenceSource::TropePage:
      return perspectives.trope_pages;
    case EvidenceSource::PaginationPage:
      return perspectives.pagination_pages;
  }
  return false;
}

// Frontier bookkeeping: every key is enqueued at most once; links that may
// be pagination pages wait until an entity with that title is known.
class Frontier {
 public:
  Frontier(const WikiScheme& scheme, const CrawlLimits& limits) : scheme_(scheme), limits_(limits) {}

  bool seed(const EntityKey& key) { return enqueued_.insert(key).second; }

  void register_entity(const EntityKey& key, EntityKind kind) {
    if (!registry_.add(key, kind)) return;
    if (!eligible(key)) return;
    const auto it = deferred_.find(key.title());
    if (it == deferred_.end()) return;
    for (const auto& candidate : it->second) push(candidate);
    deferred_.erase(it);
  }

  void consider(const EntityKey& link) {
    if (enqueued_.contains(link)) return;
    if (scheme_.kind_by_namespace(link)) {
      if (eligible(link)) push(link);
      return;
    }
    for (const auto& owner : registry_.with_title(link.ns())) {
      if (eligible(owner)) {
        push(link);
        return;
      }
    }
    deferred_[link.ns()].insert(link);
  }

  [[nodiscard]] const KindRegistry& registry() const noexcept { return registry_; }
  [[nodiscard]] std::size_t pending() const noexcept { return next_.size(); }

  std::vector<EntityKey> take_next() {
    std::vector<EntityKey> level(next_.begin(), next_.end());
    next_.clear();
    return level;
  }

 private:
  bool eligible(const EntityKey& key) const {
    if (limits_.scope.empty()) return scheme_.kind_by_namespace(key).has_value();
    return limits_.scope.contains(key.ns());
  }

  void push(const EntityKey& key) {
    if (enqueued_.insert(key).second) next_.insert(key);
  }

  const WikiScheme& scheme_;
  const CrawlLimits& limits_;
  KindRegistry registry_;
  std::set<EntityKey> enqueued_;
  std::set<EntityKey> next_;
  std::map<std::string, std::set<EntityKey>> deferred_;
};

}  // namespace

std::pair<BipartiteSnapshot, CrawlReport> crawl(PageSource& source, const std::vector<EntityKey>& seeds,
                                                const CrawlOptions& options) {
  if (seeds.empty()) throw EmptyCrawl("no seeds given");

  WikiScheme scheme = options.scheme;
  for (const auto& seed : seeds) {
    if (!scheme.kind_by_namespace(seed)) scheme.index_seeds.insert(seed);
  }

  BipartiteSnapshot snapshot(options.captured_at, "scrape");
  CrawlReport report;
  Frontier frontier(scheme, options.limits);
  std::set<EntityKey> listed_by_index;

  std::set<EntityKey> unique_seeds;
  for (const auto& seed : seeds) {
    if (frontier.seed(seed)) unique_seeds.insert(seed);
  }
  std::vector<EntityKey> level(unique_seeds.begin(), unique_seeds.end());

  std::size_t visited = 0;
  std::size_t depth = 0;
  bool seed_retrieved = false;

  while (!level.empty()) {
    if (options.limits.max_pages) {
      const std::size_t budget = *options.limits.max_pages - std::min(visited, *options.limits.max_pages);
      if (budget == 0) break;
      if (level.size() > budget) level.erase(level.begin() + static_cast<std::ptrdiff_t>(budget), level.end());
    }
    const auto fetched = fetch_level(source, level, options.workers, scheme.article_id);

    for (std::size_t i = 0; i < level.size(); ++i) {
      const EntityKey& key = level[i];
      const FetchResult& result = fetched[i].result;
      ++visited;

      if (result.status == FetchStatus::NotFound) {
        ++report.pages_not_found;
        if (scheme.kind_by_namespace(key) == EntityKind::Film && listed_by_index.contains(key)) {
          snapshot.ensure_film(key);
        }
      } else if (result.status == FetchStatus::TransientFailure) {
        ++report.pages_failed;
        report.failed_urls.push_back(result.url);
      } else {
        ++report.pages_fetched;
        if (depth == 0) seed_retrieved = true;

        if (const auto kind = scheme.kind_by_namespace(key)) frontier.register_entity(key, *kind);
        for (const auto& link : fetched[i].links) {
          if (const auto kind = scheme.kind_by_namespace(link)) frontier.register_entity(link, *kind);
        }

        const ParsedPage parsed{key, classify_page(key, frontier.registry(), scheme), fetched[i].links};
        if (parsed.kind.diagnostic) report.diagnostics.push_back(*parsed.kind.diagnostic);

        try {
          for (const auto& relation : extract_relations(parsed, scheme)) {
            if (wanted(options.perspectives, relation.evidence.source)) {
              snapshot.add_relation(relation.film, relation.trope, relation.evidence);
            }
          }
          if (parsed.kind.kind == PageKind::FilmPage) snapshot.ensure_film(key);
        } catch (const Error& e) {
          report.diagnostics.push_back(key.str() + ": " + e.what());
        }

        for (const auto& link : parsed.outlinks) {
          if (parsed.kind.kind == PageKind::IndexPage) listed_by_index.insert(link);
          frontier.consider(link);
        }
      }
      if (options.progress) options.progress(visited, frontier.pending());
    }

    if (depth == 0 && !seed_retrieved) throw EmptyCrawl("none of the seed pages could be retrieved");
    ++depth;
    if (options.limits.max_depth && depth > *options.limits.max_depth) break;
    level = frontier.take_next();
  }

  report.relations_found = connection_count(snapshot);
  report.films_discovered = snapshot.film_count();
  report.tropes_discovered = snapshot.trope_count();
  return {std::move(snapshot), std::move(report)};
}

std::pair<BipartiteSnapshot, CrawlReport> crawl(const SourceConfig& config, const std::vector<EntityKey>& seeds,
                                                const CrawlOptions& options) {
  const auto source = make_source(config);
  return crawl(*source, seeds, options);
}

bool recrawl_idempotence_check(const SourceConfig& config, const std::vector<EntityKey>& seeds,
                               const CrawlOptions& options) {
  const auto first = crawl(config, seeds, options).first;
  const auto second = crawl(config, seeds, options).first;
  return serialize_snapshot(first) == serialize_snapshot(second);
}

}  // namespace tropescope
