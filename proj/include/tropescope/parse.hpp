#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tropescope/model.hpp"

namespace tropescope {

/// Namespace conventions of the wiki being crawled.
struct WikiScheme {
  std::string article_id = "main-article";  // id of the article body element
  std::string film_namespace = "Film";
  std::set<std::string> trope_namespaces{"Main"};
  std::set<EntityKey> index_seeds;

  /// Film or Trope by namespace alone; nullopt for everything else.
  [[nodiscard]] std::optional<EntityKind> kind_by_namespace(const EntityKey& key) const;
};

/// Canonicalized targets of the anchors inside the article body element,
/// deduplicated in first-occurrence order. Anchors inside nav, header,
/// footer, aside and comment sections, HTML comments, scripts and styles
/// are ignored, as are links that are not wiki pages. Never throws on
/// malformed markup.
std::vector<EntityKey> extract_wiki_links(std::string_view html,
                                          std::string_view article_id = "main-article");

/// Film/trope entities discovered so far during a crawl, with a title
/// lookup for recognising pagination pages.
class KindRegistry {
 public:
  /// True when newly added. Throws KindConflict on a kind change.
  bool add(const EntityKey& key, EntityKind kind);

  [[nodiscard]] std::optional<EntityKind> kind_of(const EntityKey& key) const;
  [[nodiscard]] std::vector<EntityKey> with_title(const std::string& title) const;
  [[nodiscard]] bool has_title(const std::string& title) const { return titles_.contains(title); }
  [[nodiscard]] std::size_t size() const noexcept { return kinds_.size(); }

 private:
  std::map<EntityKey, EntityKind> kinds_;
  std::map<std::string, std::set<EntityKey>> titles_;
};

enum class PageKind { FilmPage, TropePage, PaginationPage, IndexPage, Other };

std::string_view to_string(PageKind kind);

struct PageClass {
  PageKind kind = PageKind::Other;
  std::optional<EntityKey> owner;  // set for PaginationPage
  std::optional<std::string> diagnostic;
};

/// Index seeds first, then the film namespace, the trope namespaces, and
/// finally pagination: a page whose namespace is the title of a known
/// entity continues that entity's listing. A trope owner beats a film owner
/// with the same title.
PageClass classify_page(const EntityKey& page, const KindRegistry& known, const WikiScheme& scheme);

struct ParsedPage {
  EntityKey page;
  PageClass kind;
  std::vector<EntityKey> outlinks;
};

ParsedPage parse_page(const EntityKey& page, std::string_view html, const KindRegistry& known,
                      const WikiScheme& scheme);

struct ExtractedRelation {
  EntityKey film;
  EntityKey trope;
  RelationEvidence evidence;

  friend bool operator==(const ExtractedRelation&, const ExtractedRelation&) = default;
};

/// Film pages yield (page, trope) for every trope outlink, trope pages
/// yield (film, page) for every film outlink, and pagination pages act as
/// their owner with PaginationPage evidence. Other kinds yield nothing.
/// Throws UnownedPagination when a pagination owner is neither a film nor a
/// trope.
std::vector<ExtractedRelation> extract_relations(const ParsedPage& parsed, const WikiScheme& scheme);

}  // namespace tropescope
