#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "v3s/frame.hpp"
#include "v3s/temporal.hpp"
#include "v3s/warp.hpp"

namespace v3s {

class Rng;

// Class lists for the two heads; an entry's position is its class id.
struct TaskCatalog {
  std::vector<SpatialSpec> spatial;
  std::vector<TemporalSpec> temporal;

  std::size_t spatial_count() const { return spatial.size(); }
  std::size_t temporal_count() const { return temporal.size(); }

  // One line per class, used for hashing and for the config/checkpoint files.
  std::string canonical() const;
  std::uint64_t hash() const;

  friend bool operator==(const TaskCatalog&, const TaskCatalog&) = default;
};

// Throws InvalidArgument on empty lists or duplicate entries.
void validate(const TaskCatalog& catalog);

struct CatalogParams {
  bool spatial_identity = true;
  std::vector<std::pair<double, double>> scales{{1, 1.15}, {1, 1.3}, {1, 1.45},
                                                {1.15, 1}, {1.3, 1}, {1.45, 1}};
  std::vector<double> projection_c{0.8, 0.65, 0.5};
  std::vector<Side> projection_sides{Side::Right, Side::Left, Side::Top, Side::Bottom};
  std::vector<int> speeds{1, 2, 3};
  std::vector<std::pair<int, int>> patterns{{1, 2}, {2, 3}, {3, 4}, {4, 5},
                                            {2, 1}, {3, 2}, {4, 3}, {5, 4}};
  int clip_length = kDefaultClipLength;
  int stage1_length = kDefaultStageLength;
  int stage2_length = kDefaultStageLength;
};

// [Identity] + scales + (c x side, c-major), and speeds + patterns.
TaskCatalog make_catalog(const CatalogParams& params);
// 19 spatial and 11 temporal classes.
TaskCatalog default_catalog();

struct LabelPair {
  std::size_t spatial = 0;
  std::size_t temporal = 0;
  friend bool operator==(const LabelPair&, const LabelPair&) = default;
};

struct DrawnSpecs {
  SpatialSpec spatial;
  TemporalSpec temporal;
  LabelPair labels;
};

// Independent uniform class draws, spatial first.
DrawnSpecs draw_specs(Rng& rng, const TaskCatalog& catalog);

struct GeometryConfig {
  int resize_to = 64;
  int crop_size = 32;
  bool random_crop = true;  // false: center crop
  StrideMode stride = StrideMode::Standard;
};

// Selects the temporal indices, warps those frames with the spatial spec on a
// canvas of canvas_size(), and preprocesses each frame with one crop. With no
// crop given the center crop is used. Warping only the selected frames is
// equivalent to warping the whole video first.
Clip transform_clip(const Video& video, const SpatialSpec& spatial, const TemporalSpec& temporal,
                    std::size_t start, const GeometryConfig& geometry,
                    std::optional<CropRect> crop = std::nullopt);

struct Provenance {
  std::size_t video_id = 0;
  std::uint64_t seed = 0;
  std::size_t start = 0;
  CropRect crop;
  SpatialSpec spatial;
  TemporalSpec temporal;
};

struct LabeledSample {
  Clip clip;
  LabelPair labels;
  Provenance provenance;
};

// Draws specs, start frame and crop from `rng` (in that order) and builds the
// sample. ClipTooShort is rethrown with the video id in the message.
LabeledSample generate_sample(const Video& video, std::size_t video_id, Rng& rng,
                              const TaskCatalog& catalog, const GeometryConfig& geometry,
                              std::uint64_t seed_for_provenance = 0);

inline constexpr int kMaxDrawRetries = 100;

// Sample i uses Rng(derive_seed(master_seed, "sample", i)): it draws a video
// and specs, re-drawing both while the temporal span does not fit, for at most
// kMaxDrawRetries attempts (then ExhaustedRetries). Output does not depend on
// `threads`.
std::vector<LabeledSample> build_dataset(std::span<const Video> videos, std::size_t n_samples,
                                         std::uint64_t master_seed, const TaskCatalog& catalog,
                                         const GeometryConfig& geometry, unsigned threads = 0);

}  // namespace v3s
