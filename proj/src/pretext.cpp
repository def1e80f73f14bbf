#include "v3s/pretext.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "v3s/error.hpp"
#include "v3s/rng.hpp"

namespace v3s {

std::string TaskCatalog::canonical() const {
  std::string out;
  for (const auto& s : spatial) out += "S " + to_string(s) + "\n";
  for (const auto& t : temporal) {
    out += "T " + to_string(t);
    if (t.kind == TemporalSpec::Kind::Scale)
      out += " l=" + std::to_string(t.l);
    else
      out += " l1=" + std::to_string(t.l1) + " l2=" + std::to_string(t.l2);
    out += "\n";
  }
  return out;
}

std::uint64_t TaskCatalog::hash() const { return fnv1a64(canonical()); }

void validate(const TaskCatalog& catalog) {
  if (catalog.spatial.empty() || catalog.temporal.empty())
    fail(ErrorKind::InvalidArgument, "catalog class lists must be non-empty");
  for (std::size_t i = 0; i < catalog.spatial.size(); ++i)
    for (std::size_t j = i + 1; j < catalog.spatial.size(); ++j)
      if (catalog.spatial[i] == catalog.spatial[j])
        fail(ErrorKind::InvalidArgument, "duplicate spatial class " + to_string(catalog.spatial[i]));
  for (std::size_t i = 0; i < catalog.temporal.size(); ++i)
    for (std::size_t j = i + 1; j < catalog.temporal.size(); ++j)
      if (catalog.temporal[i] == catalog.temporal[j])
        fail(ErrorKind::InvalidArgument, "duplicate temporal class " + to_string(catalog.temporal[i]));
}

TaskCatalog make_catalog(const CatalogParams& p) {
  TaskCatalog cat;
  if (p.spatial_identity) cat.spatial.push_back(SpatialSpec::identity());
  for (auto [a, b] : p.scales) cat.spatial.push_back(SpatialSpec::scale(a, b));
  for (double c : p.projection_c)
    for (Side side : p.projection_sides) cat.spatial.push_back(SpatialSpec::projection(c, side));
  for (int s : p.speeds) cat.temporal.push_back(TemporalSpec::scale(s, p.clip_length));
  for (auto [s1, s2] : p.patterns)
    cat.temporal.push_back(TemporalSpec::projection(s1, s2, p.stage1_length, p.stage2_length));
  validate(cat);
  return cat;
}

TaskCatalog default_catalog() { return make_catalog(CatalogParams{}); }

DrawnSpecs draw_specs(Rng& rng, const TaskCatalog& catalog) {
  validate(catalog);
  DrawnSpecs d;
  d.labels.spatial = static_cast<std::size_t>(rng.uniform_int(0, catalog.spatial_count() - 1));
  d.labels.temporal = static_cast<std::size_t>(rng.uniform_int(0, catalog.temporal_count() - 1));
  d.spatial = catalog.spatial[d.labels.spatial];
  d.temporal = catalog.temporal[d.labels.temporal];
  return d;
}

namespace {

Size crop_bounds(const Video& video, const SpatialSpec& spatial, const GeometryConfig& g) {
  const Frame& f = video.frames.front();
  const Size canvas = canvas_size(spatial, f.width, f.height);
  return resized_size(canvas.width, canvas.height, g.resize_to);
}

}  // namespace

Clip transform_clip(const Video& video, const SpatialSpec& spatial, const TemporalSpec& temporal,
                    std::size_t start, const GeometryConfig& g, std::optional<CropRect> crop) {
  if (video.empty()) fail(ErrorKind::ClipTooShort, "empty video");
  const auto indices = sample_indices(temporal, video.length(), start, g.stride);
  const Clip selected = select_frames(video, indices);

  const Frame& f = video.frames.front();
  const Size canvas = canvas_size(spatial, f.width, f.height);
  const Clip warped = apply_spatial(selected, spatial, canvas.width, canvas.height);
  const auto head = head_end_of(spatial, canvas.width, canvas.height);
  const CropRect rect = crop ? *crop
                             : center_crop(resized_size(canvas.width, canvas.height, g.resize_to),
                                           g.crop_size, g.crop_size);
  Clip out;
  out.frames.reserve(warped.length());
  for (const auto& frame : warped.frames) out.frames.push_back(preprocess(frame, g.resize_to, rect, head));
  return out;
}

LabeledSample generate_sample(const Video& video, std::size_t video_id, Rng& rng,
                              const TaskCatalog& catalog, const GeometryConfig& g,
                              std::uint64_t seed_for_provenance) {
  if (video.empty()) fail(ErrorKind::ClipTooShort, "video " + std::to_string(video_id) + " is empty");
  const DrawnSpecs d = draw_specs(rng, catalog);
  LabeledSample sample;
  sample.labels = d.labels;
  auto& prov = sample.provenance;
  prov.video_id = video_id;
  prov.seed = seed_for_provenance;
  prov.spatial = d.spatial;
  prov.temporal = d.temporal;
  try {
    prov.start = choose_start(rng, video.length(), required_span(d.temporal, g.stride));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ClipTooShort) throw;
    fail(ErrorKind::ClipTooShort, "video " + std::to_string(video_id) + ": " + e.what());
  }
  const Size bounds = crop_bounds(video, d.spatial, g);
  prov.crop = g.random_crop ? random_crop(rng, bounds, g.crop_size, g.crop_size)
                            : center_crop(bounds, g.crop_size, g.crop_size);
  sample.clip = transform_clip(video, d.spatial, d.temporal, prov.start, g, prov.crop);
  return sample;
}

std::vector<LabeledSample> build_dataset(std::span<const Video> videos, std::size_t n_samples,
                                         std::uint64_t master_seed, const TaskCatalog& catalog,
                                         const GeometryConfig& g, unsigned threads) {
  validate(catalog);
  std::vector<LabeledSample> out(n_samples);
  if (n_samples == 0) return out;
  if (videos.empty()) fail(ErrorKind::ExhaustedRetries, "no source videos");

  auto make_one = [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master_seed, "sample", i);
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxDrawRetries; ++attempt) {
      const auto vid = static_cast<std::size_t>(rng.uniform_int(0, videos.size() - 1));
      // Peek at the draw on a copy; the committed draw replays the same state.
      Rng probe = rng;
      const DrawnSpecs d = draw_specs(probe, catalog);
      if (required_span(d.temporal, g.stride) <= videos[vid].length()) {
        out[i] = generate_sample(videos[vid], vid, rng, catalog, g, seed);
        return;
      }
      rng = probe;
    }
    fail(ErrorKind::ExhaustedRetries, "sample " + std::to_string(i) + ": no video fits after " +
                                          std::to_string(kMaxDrawRetries) + " draws");
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_samples));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_samples; i = next++) {
      try {
        make_one(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_samples;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace v3s
