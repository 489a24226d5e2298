#include "tropescope/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "tropescope/error.hpp"

namespace tropescope {

namespace {

using nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

EntityKey key_at(const std::string& text, const std::string& where) {
  try {
    return EntityKey::parse(text);
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
}

std::string evidence_text(const RelationEvidence& evidence) {
  return std::string(to_string(evidence.source)) + " " + evidence.page.str();
}

RelationEvidence evidence_from(const std::string& text, const std::string& where) {
  const auto space = text.find(' ');
  if (space == std::string::npos) throw FormatError(where + ": malformed evidence '" + text + "'");
  try {
    return RelationEvidence{evidence_source_from_string(text.substr(0, space)),
                            key_at(text.substr(space + 1), where)};
  } catch (const FormatError& e) {
    throw FormatError(where + ": " + e.what());
  }
}

std::size_t count_field(const json& meta, const char* name) {
  const auto it = meta.find(name);
  if (it == meta.end() || !it->is_number_unsigned()) {
    throw FormatError(std::string("/meta/") + name + ": missing or not a nonnegative integer");
  }
  return it->get<std::size_t>();
}

std::string string_field(const json& meta, const char* name) {
  const auto it = meta.find(name);
  if (it == meta.end() || !it->is_string()) {
    throw FormatError(std::string("/meta/") + name + ": missing or not a string");
  }
  return it->get<std::string>();
}

struct Parsed {
  BipartiteSnapshot snapshot;
  SnapshotMeta meta;
};

Parsed parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("dataset is not valid JSON at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0) +
                      ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError("dataset root must be an object");
  if (!doc.contains("meta") || !doc["meta"].is_object()) throw FormatError("/meta: missing object");
  if (!doc.contains("films") || !doc["films"].is_object()) throw FormatError("/films: missing object");

  const json& meta_json = doc["meta"];
  SnapshotMeta meta;
  meta.captured_at = parse_date(string_field(meta_json, "captured_at"));
  meta.film_count = count_field(meta_json, "film_count");
  meta.trope_count = count_field(meta_json, "trope_count");
  meta.connection_count = count_field(meta_json, "connection_count");
  meta.tool_version = string_field(meta_json, "tool_version");
  meta.provenance = string_field(meta_json, "provenance");

  BipartiteSnapshot snapshot(meta.captured_at, meta.provenance);
  try {
    for (const auto& [film_text, tropes] : doc["films"].items()) {
      const std::string where = "/films/" + film_text;
      const EntityKey film = key_at(film_text, where);
      if (!tropes.is_array()) throw FormatError(where + ": expected a list of tropes");
      snapshot.ensure_film(film);
      for (const auto& trope : tropes) {
        if (!trope.is_string()) throw FormatError(where + ": trope entries must be strings");
        snapshot.add_relation(film, key_at(trope.get<std::string>(), where));
      }
    }
  } catch (const KindConflict& e) {
    throw FormatError(std::string("/films: ") + e.what());
  }

  if (doc.contains("evidence")) {
    const json& evidence = doc["evidence"];
    if (!evidence.is_object()) throw FormatError("/evidence: expected an object");
    for (const auto& [film_text, by_trope] : evidence.items()) {
      const EntityKey film = key_at(film_text, "/evidence/" + film_text);
      if (!by_trope.is_object()) throw FormatError("/evidence/" + film_text + ": expected an object");
      for (const auto& [trope_text, list] : by_trope.items()) {
        const std::string where = "/evidence/" + film_text + "/" + trope_text;
        const EntityKey trope = key_at(trope_text, where);
        if (!snapshot.contains(film, trope)) throw FormatError(where + ": evidence for an unlisted relation");
        if (!list.is_array()) throw FormatError(where + ": expected a list");
        for (const auto& item : list) {
          if (!item.is_string()) throw FormatError(where + ": evidence entries must be strings");
          snapshot.add_relation(film, trope, evidence_from(item.get<std::string>(), where));
        }
      }
    }
  }

  const SnapshotMeta actual = meta_of(snapshot);
  if (actual.film_count != meta.film_count || actual.trope_count != meta.trope_count ||
      actual.connection_count != meta.connection_count) {
    std::ostringstream msg;
    msg << "meta counts (films " << meta.film_count << ", tropes " << meta.trope_count << ", connections "
        << meta.connection_count << ") disagree with body (films " << actual.film_count << ", tropes "
        << actual.trope_count << ", connections " << actual.connection_count << ")";
    throw MetaMismatch(msg.str());
  }
  return Parsed{std::move(snapshot), std::move(meta)};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string serialize_snapshot(const BipartiteSnapshot& snapshot) {
  const SnapshotMeta meta = meta_of(snapshot);
  json doc;
  doc["meta"] = {{"captured_at", format_date(meta.captured_at)},
                 {"film_count", meta.film_count},
                 {"trope_count", meta.trope_count},
                 {"connection_count", meta.connection_count},
                 {"tool_version", meta.tool_version},
                 {"provenance", meta.provenance}};
  json films = json::object();
  for (const auto& [film, tropes] : snapshot.films()) {
    json list = json::array();
    for (const auto& trope : tropes) list.push_back(trope.str());
    films[film.str()] = std::move(list);
  }
  doc["films"] = std::move(films);

  json evidence = json::object();
  for (const auto& [relation, items] : snapshot.evidences()) {
    if (items.empty()) continue;
    std::vector<std::string> texts;
    for (const auto& item : items) texts.push_back(evidence_text(item));
    std::sort(texts.begin(), texts.end());
    evidence[relation.first.str()][relation.second.str()] = texts;
  }
  doc["evidence"] = std::move(evidence);
  return doc.dump(2) + "\n";
}

BipartiteSnapshot deserialize_snapshot(std::string_view text) {
  return parse_document(text).snapshot;
}

void save_snapshot(const BipartiteSnapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileUnreadable("cannot write " + path.string());
  out << serialize_snapshot(snapshot);
  if (!out) throw FileUnreadable("failed writing " + path.string());
}

BipartiteSnapshot load_snapshot(const std::filesystem::path& path) {
  return parse_document(read_file(path)).snapshot;
}

SnapshotMeta load_meta(const std::filesystem::path& path) {
  return parse_document(read_file(path)).meta;
}

}  // namespace tropescope
