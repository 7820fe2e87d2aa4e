#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nre/engine/config.hpp"
#include "nre/engine/state.hpp"

namespace nre::engine {

inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
    SimState state;
    SimConfig config;
};

/// Versioned JSON written via a temporary file and rename.
void save_snapshot(const std::filesystem::path& path, const SimState& state, const SimConfig& config);

/// Throws FormatError on truncation, version mismatch or diagnostic snapshots.
Snapshot load_snapshot(const std::filesystem::path& path);

/// Best-effort dump of a state left inconsistent by a failed round.
void save_diagnostic_snapshot(const std::filesystem::path& path, const SimState& state, const SimConfig& config,
                              const std::string& error);

std::string snapshot_text(const SimState& state, const SimConfig& config);
Snapshot parse_snapshot(const std::string& text);

}  // namespace nre::engine
