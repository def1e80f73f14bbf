#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "v3s/synthgen.hpp"
#include "v3s/warp.hpp"

namespace v3s {

// One line per sample, tab-separated, after a "# v3s-manifest 1" line and a
// column header:
//   id clip spatial temporal video seed start crop spatial_spec temporal_spec catalog
// crop is "x,y,w,h"; catalog is the catalog hash as 16 hex digits; clip paths
// are relative to the manifest's directory.
struct ManifestRecord {
  std::string id;
  std::string clip_path;
  std::size_t spatial_class = 0;
  std::size_t temporal_class = 0;
  std::size_t video_id = 0;
  std::uint64_t seed = 0;
  std::size_t start = 0;
  CropRect crop;
  std::string spatial_spec;
  std::string temporal_spec;
  std::uint64_t catalog_hash = 0;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

std::string hex64(std::uint64_t v);
std::uint64_t parse_hex64(std::string_view text);

std::string encode_manifest(const std::vector<ManifestRecord>& records);
// Throws BadConfig on malformed lines, duplicate ids or mixed catalog hashes.
std::vector<ManifestRecord> decode_manifest(std::string_view text);

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

// Scene corpus listing written by `synth`:
//   id clip shape object_w object_h start_x start_y vel_x vel_y width height frames channels fg bg seed
struct SceneRecord {
  std::string id;
  std::string clip_path;
  ShapeScene scene;
};

std::string encode_scenes(const std::vector<SceneRecord>& records);
std::vector<SceneRecord> decode_scenes(std::string_view text);

}  // namespace v3s
