#include "tropescope/model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "tropescope/error.hpp"

namespace tropescope {

namespace {

constexpr std::string_view kWikiPrefix = "/pmwiki/pmwiki.php/";

bool valid_token(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](unsigned char c) {
    return c == '/' || c == '?' || c == '#' || c == '\\' || c <= 0x20 || c == 0x7f;
  });
}

}  // namespace

EntityKey::EntityKey(std::string ns, std::string title) : ns_(std::move(ns)), title_(std::move(title)) {
  if (!valid_token(ns_) || !valid_token(title_)) {
    throw std::invalid_argument("invalid entity key '" + ns_ + "/" + title_ + "'");
  }
}

EntityKey EntityKey::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument("entity key '" + std::string(text) + "' has no namespace");
  }
  return EntityKey(std::string(text.substr(0, slash)), std::string(text.substr(slash + 1)));
}

std::string_view to_string(EntityKind kind) {
  return kind == EntityKind::Film ? "Film" : "Trope";
}

std::string_view to_string(EvidenceSource source) {
  switch (source) {
    case EvidenceSource::FilmPage:
      return "FilmPage";
    case EvidenceSource::TropePage:
      return "TropePage";
    case EvidenceSource::PaginationPage:
      return "PaginationPage";
  }
  return "?";
}

EvidenceSource evidence_source_from_string(std::string_view text) {
  if (text == "FilmPage") return EvidenceSource::FilmPage;
  if (text == "TropePage") return EvidenceSource::TropePage;
  if (text == "PaginationPage") return EvidenceSource::PaginationPage;
  throw FormatError("unknown evidence source '" + std::string(text) + "'");
}

EntityKey canonicalize_url(std::string_view raw) {
  std::string_view url = raw;
  if (const auto cut = url.find_first_of("?#"); cut != std::string_view::npos) {
    url = url.substr(0, cut);
  }
  // scheme://host or protocol-relative //host
  if (const auto scheme = url.find("://"); scheme != std::string_view::npos &&
                                           url.substr(0, scheme).find('/') == std::string_view::npos) {
    url.remove_prefix(scheme + 3);
    const auto path = url.find('/');
    url = path == std::string_view::npos ? std::string_view{} : url.substr(path);
  } else if (url.starts_with("//")) {
    url.remove_prefix(2);
    const auto path = url.find('/');
    url = path == std::string_view::npos ? std::string_view{} : url.substr(path);
  }
  if (!url.starts_with(kWikiPrefix)) {
    throw NotAWikiPage("not a wiki page: " + std::string(raw));
  }
  url.remove_prefix(kWikiPrefix.size());
  const auto slash = url.find('/');
  if (slash == std::string_view::npos) {
    throw NotAWikiPage("not a wiki page: " + std::string(raw));
  }
  const auto ns = url.substr(0, slash);
  const auto title = url.substr(slash + 1);
  if (!valid_token(ns) || !valid_token(title)) {
    throw NotAWikiPage("not a wiki page: " + std::string(raw));
  }
  return EntityKey(std::string(ns), std::string(title));
}

std::string wiki_path(const EntityKey& key) {
  return std::string(kWikiPrefix) + key.str();
}

Date parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  const auto bad = [&] { return FormatError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  const auto parse = [&](std::string_view part, auto& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || ptr != part.data() + part.size()) throw bad();
  };
  parse(text.substr(0, 4), y);
  parse(text.substr(5, 2), m);
  parse(text.substr(8, 2), d);
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

void BipartiteSnapshot::check_kinds(const EntityKey& film, const EntityKey& trope) const {
  if (film == trope) {
    throw KindConflict("'" + film.str() + "' used as both film and trope");
  }
  if (tropes_.contains(film)) {
    throw KindConflict("'" + film.str() + "' is already registered as a trope");
  }
  if (films_.contains(trope)) {
    throw KindConflict("'" + trope.str() + "' is already registered as a film");
  }
}

void BipartiteSnapshot::add_relation(const EntityKey& film, const EntityKey& trope) {
  check_kinds(film, trope);
  films_[film].insert(trope);
  tropes_[trope].insert(film);
  evidences_.try_emplace(Relation{film, trope});
}

void BipartiteSnapshot::add_relation(const EntityKey& film, const EntityKey& trope,
                                     const RelationEvidence& evidence) {
  add_relation(film, trope);
  evidences_[Relation{film, trope}].insert(evidence);
}

void BipartiteSnapshot::ensure_film(const EntityKey& film) {
  if (tropes_.contains(film)) {
    throw KindConflict("'" + film.str() + "' is already registered as a trope");
  }
  films_.try_emplace(film);
}

const std::set<RelationEvidence>& BipartiteSnapshot::evidence(const EntityKey& film,
                                                              const EntityKey& trope) const {
  static const std::set<RelationEvidence> kNone;
  const auto it = evidences_.find(Relation{film, trope});
  return it == evidences_.end() ? kNone : it->second;
}

bool BipartiteSnapshot::contains(const EntityKey& film, const EntityKey& trope) const {
  const auto it = films_.find(film);
  return it != films_.end() && it->second.contains(trope);
}

std::optional<EntityKind> BipartiteSnapshot::kind_of(const EntityKey& key) const {
  if (films_.contains(key)) return EntityKind::Film;
  if (tropes_.contains(key)) return EntityKind::Trope;
  return std::nullopt;
}

std::size_t connection_count(const BipartiteSnapshot& snapshot) {
  std::size_t total = 0;
  for (const auto& [film, tropes] : snapshot.films()) total += tropes.size();
  return total;
}

SnapshotMeta meta_of(const BipartiteSnapshot& snapshot) {
  return SnapshotMeta{snapshot.captured_at(),  snapshot.film_count(),   snapshot.trope_count(),
                      connection_count(snapshot), std::string(kToolVersion), snapshot.provenance()};
}

}  // namespace tropescope
