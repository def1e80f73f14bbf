#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "v3s/probe.hpp"

namespace v3s {

// Layout: "V3SP" | u32 version | u64 catalog hash | u32 input, hidden,
// n_spatial, n_temporal | u32 pool time, height, width, channels | f64
// parameters in ProbeModel::blocks() order (Eigen column-major within each).
inline constexpr std::string_view kCheckpointMagic = "V3SP";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ProbeModel model;
  std::uint64_t catalog_hash = 0;
  PoolGrid pool;
  int channels = 1;
};

std::string encode_checkpoint(const Checkpoint& checkpoint);
// Throws BadMagic, UnsupportedVersion, TruncatedFile, DimensionMismatch.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
// Throws CatalogMismatch when the stored hash differs from expected_catalog_hash.
Checkpoint load_checkpoint(const std::filesystem::path& path, std::uint64_t expected_catalog_hash);

}  // namespace v3s
