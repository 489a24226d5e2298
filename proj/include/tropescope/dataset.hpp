#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tropescope/model.hpp"

namespace tropescope {

/// Deterministic JSON form of a snapshot: a `meta` header, the `films`
/// mapping (film -> sorted trope list) and an `evidence` section. Object
/// keys and lists are emitted in lexicographic order, so equal snapshots
/// serialize to identical bytes. The trope index is rebuilt on load.
std::string serialize_snapshot(const BipartiteSnapshot& snapshot);

/// Throws FormatError (with line/column for syntax errors) or MetaMismatch.
BipartiteSnapshot deserialize_snapshot(std::string_view text);

void save_snapshot(const BipartiteSnapshot& snapshot, const std::filesystem::path& path);
BipartiteSnapshot load_snapshot(const std::filesystem::path& path);

/// Reads only the header of a dataset file, validated against its body.
SnapshotMeta load_meta(const std::filesystem::path& path);

}  // namespace tropescope
