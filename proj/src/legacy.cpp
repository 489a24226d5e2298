#include "tropescope/legacy.hpp"

#include <fstream>
#include <optional>
#include <string_view>

#include "tropescope/error.hpp"

namespace tropescope {

namespace {

enum class TermType { Iri, Blank, Literal };

struct Term {
  TermType type;
  std::string value;
};

void skip_space(std::string_view line, std::size_t& i) {
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
}

std::optional<Term> read_term(std::string_view line, std::size_t& i) {
  skip_space(line, i);
  if (i >= line.size()) return std::nullopt;
  if (line[i] == '<') {
    const auto end = line.find('>', i + 1);
    if (end == std::string_view::npos) return std::nullopt;
    Term term{TermType::Iri, std::string(line.substr(i + 1, end - i - 1))};
    i = end + 1;
    return term;
  }
  if (line.substr(i, 2) == "_:") {
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    return Term{TermType::Blank, std::string(line.substr(start, i - start))};
  }
  if (line[i] == '"') {
    std::size_t j = i + 1;
    while (j < line.size() && line[j] != '"') j += line[j] == '\\' ? 2 : 1;
    if (j >= line.size()) return std::nullopt;
    Term term{TermType::Literal, std::string(line.substr(i + 1, j - i - 1))};
    i = j + 1;
    if (i < line.size() && line[i] == '@') {
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '.') ++i;
    } else if (line.substr(i, 2) == "^^") {
      i += 2;
      if (i >= line.size() || line[i] != '<') return std::nullopt;
      const auto end = line.find('>', i);
      if (end == std::string_view::npos) return std::nullopt;
      i = end + 1;
    }
    return term;
  }
  return std::nullopt;
}

}  // namespace

std::optional<EntityKey> resource_key(std::string_view iri) {
  try {
    return canonicalize_url(iri);
  } catch (const NotAWikiPage&) {
  }
  if (const auto cut = iri.find_first_of("?#"); cut != std::string_view::npos) iri = iri.substr(0, cut);
  while (iri.ends_with('/')) iri.remove_suffix(1);
  const auto last = iri.rfind('/');
  if (last == std::string_view::npos || last == 0) return std::nullopt;
  const auto prev = iri.rfind('/', last - 1);
  if (prev == std::string_view::npos) return std::nullopt;
  try {
    return EntityKey(std::string(iri.substr(prev + 1, last - prev - 1)), std::string(iri.substr(last + 1)));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::pair<BipartiteSnapshot, LegacyImportStats> import_legacy(std::istream& in, const std::set<std::string>& predicates,
                                                              const WikiScheme& scheme, Date captured_at) {
  BipartiteSnapshot snapshot(captured_at, "legacy-import");
  LegacyImportStats stats;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = raw;
    if (line.ends_with('\r')) line.remove_suffix(1);
    std::size_t i = 0;
    skip_space(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    ++stats.lines;

    const auto subject = read_term(line, i);
    const auto predicate = read_term(line, i);
    const auto object = read_term(line, i);
    skip_space(line, i);
    const bool terminated = i < line.size() && line[i] == '.';
    if (terminated) ++i;
    skip_space(line, i);
    if (!subject || !predicate || !object || !terminated || (i < line.size() && line[i] != '#') ||
        subject->type == TermType::Literal || predicate->type != TermType::Iri) {
      ++stats.malformed;
      continue;
    }
    if (!predicates.contains(predicate->value)) {
      ++stats.skipped_predicate;
      continue;
    }
    const auto film = subject->type == TermType::Iri ? resource_key(subject->value) : std::nullopt;
    const auto trope = object->type == TermType::Iri ? resource_key(object->value) : std::nullopt;
    if (!film || !trope || scheme.kind_by_namespace(*film) != EntityKind::Film ||
        scheme.kind_by_namespace(*trope) != EntityKind::Trope) {
      ++stats.skipped_resource;
      continue;
    }
    snapshot.add_relation(*film, *trope, RelationEvidence{EvidenceSource::FilmPage, *film});
    ++stats.relations;
  }
  if (stats.relations == 0) stats.warnings.emplace_back("ZeroRelations: no line matched the selected predicates");
  return {std::move(snapshot), std::move(stats)};
}

std::pair<BipartiteSnapshot, LegacyImportStats> import_legacy(const std::filesystem::path& path,
                                                              const std::set<std::string>& predicates,
                                                              const WikiScheme& scheme, Date captured_at) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable("cannot read " + path.string());
  return import_legacy(in, predicates, scheme, captured_at);
}

}  // namespace tropescope
