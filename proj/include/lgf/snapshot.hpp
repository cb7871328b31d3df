#pragma once

/// @file snapshot.hpp
/// @brief Binary snapshot files (.tpfs).
///
/// Layout: a 64-byte little-endian header
///   [0, 4)   magic "TPFS"
///   [4, 8)   uint32 format version (1)
///   [8, 12)  uint32 dim
///   [12, 16) uint32 N
///   [16, 24) double L
///   [24, 32) double t
///   [32, 36) uint32 field count (2 + dim)
///   [36, 64) zero
/// followed by m, n and the components of u as little-endian doubles in the
/// field storage order.

#include <cstdint>
#include <filesystem>
#include <string>

#include "lgf/field.hpp"

namespace lgf {

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 64;

std::string encode_snapshot(const FlowState& state);

/// Throws FormatError on bad magic, version, sizes, truncation or non-finite
/// payload values.
FlowState decode_snapshot(const std::string& bytes);

/// Writes to a temporary sibling and renames, so readers never see a
/// partial file.
void write_snapshot(const FlowState& state, const std::filesystem::path& path);
FlowState read_snapshot(const std::filesystem::path& path);

}  // namespace lgf
