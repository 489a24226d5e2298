#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

namespace tropescope {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Canonical identity of a wiki page: the (Namespace, Title) pair of its
/// /pmwiki/pmwiki.php/<Namespace>/<Title> URL. Comparison is byte-wise and
/// case-sensitive.
class EntityKey {
 public:
  /// Throws std::invalid_argument when either token is empty or contains a
  /// path separator, query or fragment marker, or whitespace.
  EntityKey(std::string ns, std::string title);

  /// Parses the "Namespace/Title" form used in dataset files and fixture
  /// indexes.
  static EntityKey parse(std::string_view text);

  [[nodiscard]] const std::string& ns() const noexcept { return ns_; }
  [[nodiscard]] const std::string& title() const noexcept { return title_; }
  [[nodiscard]] std::string str() const { return ns_ + "/" + title_; }

  friend auto operator<=>(const EntityKey&, const EntityKey&) = default;
  friend bool operator==(const EntityKey&, const EntityKey&) = default;

 private:
  std::string ns_;
  std::string title_;
};

enum class EntityKind { Film, Trope };

std::string_view to_string(EntityKind kind);

enum class EvidenceSource { FilmPage, TropePage, PaginationPage };

std::string_view to_string(EvidenceSource source);
EvidenceSource evidence_source_from_string(std::string_view text);

/// Which page a relation was read from.
struct RelationEvidence {
  EvidenceSource source;
  EntityKey page;

  friend auto operator<=>(const RelationEvidence&, const RelationEvidence&) = default;
  friend bool operator==(const RelationEvidence&, const RelationEvidence&) = default;
};

/// Strips scheme, host, query and fragment and matches the wiki path
/// pattern. Throws NotAWikiPage for anything else.
EntityKey canonicalize_url(std::string_view raw_url);

/// Site-relative URL of a wiki page.
std::string wiki_path(const EntityKey& key);

using Date = std::chrono::year_month_day;

/// ISO "YYYY-MM-DD". Throws FormatError on anything else.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

using KeySet = std::set<EntityKey>;
using RelationIndex = std::map<EntityKey, KeySet>;

/// Dated film/trope relation set with an index on each side.
///
/// Films may have zero tropes; tropes only exist through at least one
/// relation. Every mutation keeps both indexes symmetric.
class BipartiteSnapshot {
 public:
  using Relation = std::pair<EntityKey, EntityKey>;  // (film, trope)

  BipartiteSnapshot() = default;
  explicit BipartiteSnapshot(Date captured_at, std::string provenance = "scrape")
      : captured_at_(captured_at), provenance_(std::move(provenance)) {}

  /// Idempotent union: inserts the relation once and merges the evidence.
  /// Throws KindConflict if either key is already registered with the
  /// other kind, or if film == trope.
  void add_relation(const EntityKey& film, const EntityKey& trope,
                    const RelationEvidence& evidence);
  /// Relation without any evidence (used when loading evidence-less files).
  void add_relation(const EntityKey& film, const EntityKey& trope);

  /// Registers a film even when it has no tropes.
  void ensure_film(const EntityKey& film);

  [[nodiscard]] const RelationIndex& films() const noexcept { return films_; }
  [[nodiscard]] const RelationIndex& tropes() const noexcept { return tropes_; }
  [[nodiscard]] const std::map<Relation, std::set<RelationEvidence>>& evidences() const noexcept {
    return evidences_;
  }
  [[nodiscard]] const std::set<RelationEvidence>& evidence(const EntityKey& film,
                                                           const EntityKey& trope) const;

  [[nodiscard]] bool contains(const EntityKey& film, const EntityKey& trope) const;
  [[nodiscard]] std::optional<EntityKind> kind_of(const EntityKey& key) const;

  [[nodiscard]] std::size_t film_count() const noexcept { return films_.size(); }
  [[nodiscard]] std::size_t trope_count() const noexcept { return tropes_.size(); }

  [[nodiscard]] Date captured_at() const noexcept { return captured_at_; }
  void set_captured_at(Date date) noexcept { captured_at_ = date; }
  [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }
  void set_provenance(std::string provenance) { provenance_ = std::move(provenance); }

  friend bool operator==(const BipartiteSnapshot&, const BipartiteSnapshot&) = default;

 private:
  void check_kinds(const EntityKey& film, const EntityKey& trope) const;

  Date captured_at_{std::chrono::year{1970}, std::chrono::January, std::chrono::day{1}};
  std::string provenance_ = "scrape";
  RelationIndex films_;
  RelationIndex tropes_;
  std::map<Relation, std::set<RelationEvidence>> evidences_;
};

/// Σ over films of their trope count.
std::size_t connection_count(const BipartiteSnapshot& snapshot);

struct SnapshotMeta {
  Date captured_at;
  std::size_t film_count = 0;
  std::size_t trope_count = 0;
  std::size_t connection_count = 0;
  std::string tool_version{kToolVersion};
  std::string provenance;

  friend bool operator==(const SnapshotMeta&, const SnapshotMeta&) = default;
};

SnapshotMeta meta_of(const BipartiteSnapshot& snapshot);

}  // namespace tropescope
