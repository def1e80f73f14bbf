#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "v3s/checkpoint.hpp"
#include "v3s/evalkit.hpp"
#include "v3s/manifest.hpp"
#include "v3s/probe.hpp"
#include "v3s/run_config.hpp"

namespace v3s::cli {

namespace fs = std::filesystem;

// Scene i is random_scene(config.scenes, derive_seed(seed, "scene", i)).
std::vector<ShapeScene> corpus_scenes(const RunConfig& config);
std::vector<Video> render_corpus(const RunConfig& config);

// `synth`: <out>/scenes.tsv plus <out>/videos/scene_NNNN.v3sc.
void synth(const RunConfig& config, const fs::path& out_dir);
std::vector<Video> load_corpus(const fs::path& corpus_dir);

// `make-dataset`: <out>/manifest.tsv plus <out>/clips/sample_NNNNNN.v3sc.
// Videos come from `corpus_dir` when given, else are rendered from the config.
// The directory is assembled under <out>.partial and renamed into place.
void make_dataset(const RunConfig& config, const std::optional<fs::path>& corpus_dir,
                  const fs::path& out_dir);

std::vector<ManifestRecord> dataset_records(const std::vector<LabeledSample>& samples,
                                            std::uint64_t catalog_hash);

// Pooled clips of a manifest with their labels.
std::vector<Example> load_examples(const fs::path& manifest_path, const PoolGrid& pool);
std::vector<Example> to_examples(const std::vector<LabeledSample>& samples, const PoolGrid& pool);

// Probe initialised from derive_seed(seed, "probe-init", 0) and trained with
// shuffle seed derive_seed(seed, "train", 0).
TrainResult fit_probe(const RunConfig& config, const std::vector<Example>& data, int channels);

// `train-probe`: <out>/checkpoint.v3sp and <out>/history.tsv.
TrainResult train_probe(const RunConfig& config, const fs::path& manifest_path, const fs::path& out_dir);

std::string history_table(const std::vector<EpochStats>& history);

// `gradcheck`: `configurations` random (model, batch) pairs.
GradCheckReport gradcheck(std::size_t configurations, std::uint64_t seed);

enum class Head { Spatial, Temporal };

struct RetrievalRow {
  std::size_t k = 0;
  double recall = 0.0;
};

// recall@{1,5,10,20,50} (values above the gallery size are skipped).
std::vector<RetrievalRow> retrieval_report(const ProbeModel& model, const std::vector<Example>& gallery,
                                           const std::vector<Example>& queries, Head head);
std::string retrieval_table(const std::vector<RetrievalRow>& rows);

// `report`: confusion matrices and per-head accuracy.
std::string classification_report(const ProbeModel& model, const std::vector<Example>& data,
                                  const TaskCatalog& catalog);

// `transform`: one named spec pair applied to a stored video, center crop.
Clip transform_file(const RunConfig& config, const fs::path& in, const SpatialSpec& spatial,
                    const TemporalSpec& temporal, std::size_t start);

}  // namespace v3s::cli
