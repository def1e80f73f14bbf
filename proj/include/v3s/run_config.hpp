#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "v3s/pretext.hpp"
#include "v3s/probe.hpp"
#include "v3s/synthgen.hpp"

namespace v3s {

// Everything a run depends on besides the master seed's children. Defaults are
// the desk-scale configuration used throughout the test suite.
struct RunConfig {
  CatalogParams catalog;
  GeometryConfig geometry;
  SceneConfig scenes;
  int videos = 64;
  PoolGrid pool;
  int hidden = 128;
  TrainConfig train;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
};

// Plain text, one "key = value" per line, '#' comments. List values are
// space-separated; pairs are written "a:b". Unknown keys, repeated keys and
// malformed values throw BadConfig. Missing keys keep their defaults.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical text listing every key; parse_run_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

}  // namespace v3s
