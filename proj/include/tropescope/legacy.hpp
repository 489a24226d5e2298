#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tropescope/model.hpp"
#include "tropescope/parse.hpp"

namespace tropescope {

/// Feature predicate used by the DB Tropes dumps to attach a trope to a
/// work. Override on the command line when a dump uses another IRI.
inline const std::set<std::string> kDefaultFeaturePredicates{
    "http://skipforward.net/skipforward/resource/seeder/skipinions/hasFeature",
};

struct LegacyImportStats {
  std::size_t lines = 0;
  std::size_t relations = 0;           // matching lines, duplicates included
  std::size_t skipped_predicate = 0;   // well-formed, predicate not selected
  std::size_t skipped_resource = 0;    // subject not a film or object not a trope
  std::size_t malformed = 0;
  std::vector<std::string> warnings;
};

/// Resolves a resource IRI to an entity key: wiki page URLs through
/// canonicalize_url, anything else through its last two path segments
/// (".../resource/Film/JamesBond" -> Film/JamesBond).
std::optional<EntityKey> resource_key(std::string_view iri);

/// Reads `<subject> <predicate> <object> .` lines. Relations come from lines
/// whose predicate is selected, whose subject is a film and whose object is
/// a trope; they carry FilmPage evidence and the snapshot provenance is
/// "legacy-import". Bad lines are counted, never fatal.
std::pair<BipartiteSnapshot, LegacyImportStats> import_legacy(std::istream& in, const std::set<std::string>& predicates,
                                                              const WikiScheme& scheme, Date captured_at);

/// Throws FileUnreadable.
std::pair<BipartiteSnapshot, LegacyImportStats> import_legacy(const std::filesystem::path& path,
                                                              const std::set<std::string>& predicates,
                                                              const WikiScheme& scheme, Date captured_at);

}  // namespace tropescope
