#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tropescope/model.hpp"
#include "tropescope/stats.hpp"

namespace tropescope {

/// Manually curated old -> new names, kept separately for films and
/// tropes. Injective and chain-free: no new name is also an old name.
class RenameMap {
 public:
  /// Throws ConfigError when the mapping would stop being injective or
  /// would form a chain.
  void add(EntityKind kind, const EntityKey& old_key, const EntityKey& new_key);

  [[nodiscard]] EntityKey resolve(EntityKind kind, const EntityKey& old_key) const;
  /// Old name of a renamed entity, if any.
  [[nodiscard]] std::optional<EntityKey> original(EntityKind kind, const EntityKey& new_key) const;
  [[nodiscard]] std::size_t size() const noexcept { return forward_[0].size() + forward_[1].size(); }

  /// `{"films": {"Film/Old": "Film/New"}, "tropes": {...}}`; both sections
  /// optional. Throws ConfigError.
  static RenameMap parse(std::string_view json_text);
  static RenameMap load(const std::filesystem::path& path);

 private:
  static std::size_t slot(EntityKind kind) { return kind == EntityKind::Film ? 0 : 1; }

  std::map<EntityKey, EntityKey> forward_[2];
  std::map<EntityKey, EntityKey> backward_[2];
};

EntityKind entity_kind(Axis axis);

struct RankedEntry {
  EntityKey key;
  std::size_t count = 0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Every entity of the axis, descending by count, ties by key.
std::vector<RankedEntry> ranking(const BipartiteSnapshot& snapshot, Axis axis);
/// First min(n, population) entries of ranking().
std::vector<RankedEntry> top_n(const BipartiteSnapshot& snapshot, Axis axis, std::size_t n);

/// 100 * (new - old) / old; empty when old is missing or zero.
std::optional<double> percent_change(std::optional<std::size_t> old_count, std::size_t new_count);
std::optional<double> percent_change(std::size_t old_count, std::size_t new_count);
std::optional<double> percent_change(double old_value, double new_value);

/// "+1,329.0%", "-95.4%", "--" for an undefined increment. One decimal,
/// rounded like printf's "%.1f".
std::string format_percent(std::optional<double> value);

/// 1234567 -> "1,234,567".
std::string group_thousands(std::size_t value);
/// 3 -> "3rd", 11 -> "11th", 16030 -> "16,030th".
std::string format_ordinal(std::size_t value);

/// Entities present in both lists once old names are resolved; reported
/// under their new names.
std::set<EntityKey> mark_common(std::span<const EntityKey> old_top, std::span<const EntityKey> new_top,
                                const RenameMap& renames, EntityKind kind);

/// One row of a side-by-side top-N comparison.
struct DiffRow {
  std::optional<EntityKey> old_name;
  std::optional<std::size_t> old_count;
  std::optional<EntityKey> new_name;
  std::optional<std::size_t> new_count;
  std::string increment_display;  // new entity's change since the old snapshot
  bool old_common = false;
  bool new_common = false;
  std::optional<std::string> rank_move_display;
};

struct TopTable {
  Axis axis = Axis::TropesPerFilm;
  std::size_t n = 0;
  std::vector<DiffRow> rows;
};

/// Old top-n beside new top-n. The increment on each row belongs to the
/// new-side entity, measured against its (rename-resolved) count anywhere
/// in the old snapshot.
TopTable diff_top(const BipartiteSnapshot& old_snapshot, const BipartiteSnapshot& new_snapshot, Axis axis,
                  const RenameMap& renames, std::size_t n);

struct RankMove {
  EntityKey key;
  std::size_t old_count = 0;
  std::size_t new_count = 0;
  std::string increment_display;
  std::string move_display;  // "+3rd", or "--" when absent from the new snapshot
};

/// Where the old top-n ended up in the full new ordering. Ranks are
/// zero-based unless `rank_base` says otherwise.
std::vector<RankMove> rank_moves(std::span<const RankedEntry> old_ranking, std::span<const RankedEntry> new_ranking,
                                 EntityKind kind, const RenameMap& renames, std::size_t n,
                                 std::size_t rank_base = 0);
std::vector<RankMove> rank_moves(const BipartiteSnapshot& old_snapshot, const BipartiteSnapshot& new_snapshot,
                                 Axis axis, const RenameMap& renames, std::size_t n, std::size_t rank_base = 0);

struct GrowthLine {
  std::string label;
  double old_value = 0;
  double new_value = 0;
  std::optional<double> change;
};

struct GrowthReport {
  std::vector<GrowthLine> lines;

  [[nodiscard]] const GrowthLine& line(std::string_view label) const;
};

/// Film, trope and connection counts, mean degree per axis, plus the
/// connection count implied by films x mean tropes per film.
/// `*_stats` are (TropesPerFilm, FilmsPerTrope) summaries.
GrowthReport growth_report(const SnapshotMeta& old_meta, const SnapshotMeta& new_meta,
                           const std::pair<DescriptiveSummary, DescriptiveSummary>& old_stats,
                           const std::pair<DescriptiveSummary, DescriptiveSummary>& new_stats);

}  // namespace tropescope
