#include "tropescope/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "tropescope/error.hpp"

namespace tropescope {

void RenameMap::add(EntityKind kind, const EntityKey& old_key, const EntityKey& new_key) {
  auto& forward = forward_[slot(kind)];
  auto& backward = backward_[slot(kind)];
  if (old_key == new_key) throw ConfigError("rename of '" + old_key.str() + "' to itself");
  if (const auto it = forward.find(old_key); it != forward.end()) {
    if (it->second == new_key) return;
    throw ConfigError("'" + old_key.str() + "' renamed twice");
  }
  if (backward.contains(new_key)) throw ConfigError("two names renamed to '" + new_key.str() + "'");
  if (backward.contains(old_key) || forward.contains(new_key)) {
    throw ConfigError("rename chain through '" + (backward.contains(old_key) ? old_key : new_key).str() + "'");
  }
  forward.emplace(old_key, new_key);
  backward.emplace(new_key, old_key);
}

EntityKey RenameMap::resolve(EntityKind kind, const EntityKey& old_key) const {
  const auto& forward = forward_[slot(kind)];
  const auto it = forward.find(old_key);
  return it == forward.end() ? old_key : it->second;
}

std::optional<EntityKey> RenameMap::original(EntityKind kind, const EntityKey& new_key) const {
  const auto& backward = backward_[slot(kind)];
  const auto it = backward.find(new_key);
  if (it == backward.end()) return std::nullopt;
  return it->second;
}

RenameMap RenameMap::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed rename map: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("rename map must be a JSON object");
  RenameMap map;
  for (const auto& [section, kind] : {std::pair{"films", EntityKind::Film}, std::pair{"tropes", EntityKind::Trope}}) {
    if (!doc.contains(section)) continue;
    const auto& entries = doc[section];
    if (!entries.is_object()) throw ConfigError(std::string("rename map section '") + section + "' must be an object");
    for (const auto& [old_text, new_value] : entries.items()) {
      if (!new_value.is_string()) throw ConfigError("rename target for '" + old_text + "' must be a string");
      try {
        map.add(kind, EntityKey::parse(old_text), EntityKey::parse(new_value.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("rename map: ") + e.what());
      }
    }
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "films" && key != "tropes") throw ConfigError("unknown rename map section '" + key + "'");
  }
  return map;
}

RenameMap RenameMap::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable("cannot read rename map " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

EntityKind entity_kind(Axis axis) {
  return axis == Axis::TropesPerFilm ? EntityKind::Film : EntityKind::Trope;
}

std::vector<RankedEntry> ranking(const BipartiteSnapshot& snapshot, Axis axis) {
  const auto& index = axis == Axis::TropesPerFilm ? snapshot.films() : snapshot.tropes();
  std::vector<RankedEntry> out;
  out.reserve(index.size());
  for (const auto& [key, neighbours] : index) out.push_back(RankedEntry{key, neighbours.size()});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedEntry& a, const RankedEntry& b) { return a.count > b.count; });
  return out;
}

std::vector<RankedEntry> top_n(const BipartiteSnapshot& snapshot, Axis axis, std::size_t n) {
  auto out = ranking(snapshot, axis);
  if (out.size() > n) out.erase(out.begin() + static_cast<std::ptrdiff_t>(n), out.end());
  return out;
}

std::optional<double> percent_change(std::optional<std::size_t> old_count, std::size_t new_count) {
  if (!old_count || *old_count == 0) return std::nullopt;
  return percent_change(static_cast<double>(*old_count), static_cast<double>(new_count));
}

std::optional<double> percent_change(std::size_t old_count, std::size_t new_count) {
  return percent_change(std::optional<std::size_t>(old_count), new_count);
}

std::optional<double> percent_change(double old_value, double new_value) {
  if (old_value == 0 || !std::isfinite(old_value) || !std::isfinite(new_value)) return std::nullopt;
  return 100.0 * (new_value - old_value) / old_value;
}

std::string group_thousands(std::size_t value) {
  std::string digits = std::to_string(value);
  for (auto i = static_cast<std::ptrdiff_t>(digits.size()) - 3; i > 0; i -= 3) {
    digits.insert(static_cast<std::size_t>(i), ",");
  }
  return digits;
}

std::string format_percent(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return "--";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", std::fabs(*value));
  const std::string text = buf;
  const auto dot = text.find('.');
  const std::string whole = text.substr(0, dot);
  const bool negative = *value < 0 && text != "0.0";
  std::string out = negative ? "-" : "+";
  out += group_thousands(std::stoull(whole));
  out += text.substr(dot);
  out += '%';
  return out;
}

std::string format_ordinal(std::size_t value) {
  const auto last_two = value % 100;
  const char* suffix = "th";
  if (last_two < 11 || last_two > 13) {
    switch (value % 10) {
      case 1:
        suffix = "st";
        break;
      case 2:
        suffix = "nd";
        break;
      case 3:
        suffix = "rd";
        break;
      default:
        break;
    }
  }
  return group_thousands(value) + suffix;
}

std::set<EntityKey> mark_common(std::span<const EntityKey> old_top, std::span<const EntityKey> new_top,
                                const RenameMap& renames, EntityKind kind) {
  std::set<EntityKey> resolved;
  for (const auto& key : old_top) resolved.insert(renames.resolve(kind, key));
  std::set<EntityKey> common;
  for (const auto& key : new_top) {
    if (resolved.contains(key)) common.insert(key);
  }
  return common;
}

namespace {

std::optional<std::size_t> degree_in(const BipartiteSnapshot& snapshot, Axis axis, const EntityKey& key) {
  const auto& index = axis == Axis::TropesPerFilm ? snapshot.films() : snapshot.tropes();
  const auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second.size();
}

std::string increment_text(std::optional<std::size_t> old_count, std::optional<std::size_t> new_count) {
  if (!new_count || *new_count == 0) return "--";
  return format_percent(percent_change(old_count, *new_count));
}

}  // namespace

TopTable diff_top(const BipartiteSnapshot& old_snapshot, const BipartiteSnapshot& new_snapshot, Axis axis,
                  const RenameMap& renames, std::size_t n) {
  const EntityKind kind = entity_kind(axis);
  const auto old_top = top_n(old_snapshot, axis, n);
  const auto new_top = top_n(new_snapshot, axis, n);

  std::vector<EntityKey> old_keys;
  std::vector<EntityKey> new_keys;
  for (const auto& e : old_top) old_keys.push_back(e.key);
  for (const auto& e : new_top) new_keys.push_back(e.key);
  const auto common = mark_common(old_keys, new_keys, renames, kind);

  TopTable table{axis, n, {}};
  const std::size_t rows = std::max(old_top.size(), new_top.size());
  for (std::size_t i = 0; i < rows; ++i) {
    DiffRow row;
    if (i < old_top.size()) {
      row.old_name = old_top[i].key;
      row.old_count = old_top[i].count;
      row.old_common = common.contains(renames.resolve(kind, old_top[i].key));
    }
    if (i < new_top.size()) {
      const auto& key = new_top[i].key;
      row.new_name = key;
      row.new_count = new_top[i].count;
      row.new_common = common.contains(key);
      const EntityKey old_key = renames.original(kind, key).value_or(key);
      row.increment_display = increment_text(degree_in(old_snapshot, axis, old_key), new_top[i].count);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<RankMove> rank_moves(std::span<const RankedEntry> old_ranking, std::span<const RankedEntry> new_ranking,
                                 EntityKind kind, const RenameMap& renames, std::size_t n, std::size_t rank_base) {
  std::map<EntityKey, std::pair<std::size_t, std::size_t>> position;  // key -> (rank, count)
  for (std::size_t i = 0; i < new_ranking.size(); ++i) {
    position.try_emplace(new_ranking[i].key, i, new_ranking[i].count);
  }
  std::vector<RankMove> out;
  for (std::size_t i = 0; i < old_ranking.size() && i < n; ++i) {
    const auto& entry = old_ranking[i];
    RankMove move{entry.key, entry.count, 0, "--", "--"};
    const auto it = position.find(renames.resolve(kind, entry.key));
    if (it != position.end()) {
      move.new_count = it->second.second;
      move.increment_display = increment_text(entry.count, move.new_count);
      move.move_display = "+" + format_ordinal(it->second.first + rank_base);
    }
    out.push_back(std::move(move));
  }
  return out;
}

std::vector<RankMove> rank_moves(const BipartiteSnapshot& old_snapshot, const BipartiteSnapshot& new_snapshot,
                                 Axis axis, const RenameMap& renames, std::size_t n, std::size_t rank_base) {
  const auto old_ranking = top_n(old_snapshot, axis, n);
  const auto new_ranking = ranking(new_snapshot, axis);
  return rank_moves(old_ranking, new_ranking, entity_kind(axis), renames, n, rank_base);
}

const GrowthLine& GrowthReport::line(std::string_view label) const {
  const auto it = std::find_if(lines.begin(), lines.end(), [&](const GrowthLine& l) { return l.label == label; });
  if (it == lines.end()) throw std::out_of_range("no growth line '" + std::string(label) + "'");
  return *it;
}

GrowthReport growth_report(const SnapshotMeta& old_meta, const SnapshotMeta& new_meta,
                           const std::pair<DescriptiveSummary, DescriptiveSummary>& old_stats,
                           const std::pair<DescriptiveSummary, DescriptiveSummary>& new_stats) {
  GrowthReport report;
  const auto add = [&](std::string label, double before, double after) {
    report.lines.push_back(GrowthLine{std::move(label), before, after, percent_change(before, after)});
  };
  add("films", static_cast<double>(old_meta.film_count), static_cast<double>(new_meta.film_count));
  add("tropes", static_cast<double>(old_meta.trope_count), static_cast<double>(new_meta.trope_count));
  add("connections", static_cast<double>(old_meta.connection_count), static_cast<double>(new_meta.connection_count));
  add("mean-tropes-per-film", old_stats.first.mean, new_stats.first.mean);
  add("mean-films-per-trope", old_stats.second.mean, new_stats.second.mean);
  add("connections-from-film-means", static_cast<double>(old_meta.film_count) * old_stats.first.mean,
      static_cast<double>(new_meta.film_count) * new_stats.first.mean);
  add("connections-from-trope-means", static_cast<double>(old_meta.trope_count) * old_stats.second.mean,
      static_cast<double>(new_meta.trope_count) * new_stats.second.mean);
  return report;
}

}  // namespace tropescope
