#include "v3s/commands.hpp"

#include <cstdio>
#include <sstream>

#include "v3s/clip_file.hpp"
#include "v3s/error.hpp"
#include "v3s/fileio.hpp"
#include "v3s/rng.hpp"

namespace v3s::cli {

namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

void replace_directory(const fs::path& staged, const fs::path& target) {
  std::error_code ec;
  fs::remove_all(target, ec);
  fs::rename(staged, target, ec);
  if (ec) fail(ErrorKind::IoFailure, "cannot move " + staged.string() + " to " + target.string());
}

fs::path staging_dir(const fs::path& out_dir) {
  fs::path staged = out_dir;
  staged += ".partial";
  std::error_code ec;
  fs::remove_all(staged, ec);
  fs::create_directories(staged, ec);
  if (ec) fail(ErrorKind::IoFailure, "cannot create " + staged.string());
  return staged;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::vector<ShapeScene> corpus_scenes(const RunConfig& config) {
  if (config.videos <= 0) fail(ErrorKind::BadConfig, "videos must be positive");
  std::vector<ShapeScene> scenes;
  scenes.reserve(config.videos);
  for (int i = 0; i < config.videos; ++i)
    scenes.push_back(random_scene(config.scenes, derive_seed(config.seed, "scene", i)));
  return scenes;
}

std::vector<Video> render_corpus(const RunConfig& config) {
  std::vector<Video> videos;
  for (const auto& s : corpus_scenes(config)) videos.push_back(render(s));
  return videos;
}

void synth(const RunConfig& config, const fs::path& out_dir) {
  const fs::path staged = staging_dir(out_dir);
  std::vector<SceneRecord> records;
  const auto scenes = corpus_scenes(config);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    SceneRecord r{numbered("scene_", i, 4), "videos/" + numbered("scene_", i, 4) + ".v3sc", scenes[i]};
    write_clip(staged / r.clip_path, render(scenes[i]));
    records.push_back(std::move(r));
  }
  write_file_atomic(staged / "scenes.tsv", encode_scenes(records));
  replace_directory(staged, out_dir);
}

std::vector<Video> load_corpus(const fs::path& corpus_dir) {
  std::vector<Video> videos;
  for (const auto& r : decode_scenes(read_file(corpus_dir / "scenes.tsv")))
    videos.push_back(read_clip(corpus_dir / r.clip_path));
  return videos;
}

std::vector<ManifestRecord> dataset_records(const std::vector<LabeledSample>& samples,
                                            std::uint64_t catalog_hash) {
  std::vector<ManifestRecord> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    ManifestRecord r;
    r.id = numbered("sample_", i, 6);
    r.clip_path = "clips/" + r.id + ".v3sc";
    r.spatial_class = s.labels.spatial;
    r.temporal_class = s.labels.temporal;
    r.video_id = s.provenance.video_id;
    r.seed = s.provenance.seed;
    r.start = s.provenance.start;
    r.crop = s.provenance.crop;
    r.spatial_spec = to_string(s.provenance.spatial);
    r.temporal_spec = to_string(s.provenance.temporal);
    r.catalog_hash = catalog_hash;
    out.push_back(std::move(r));
  }
  return out;
}

void make_dataset(const RunConfig& config, const std::optional<fs::path>& corpus_dir,
                  const fs::path& out_dir) {
  const TaskCatalog catalog = make_catalog(config.catalog);
  const auto videos = corpus_dir ? load_corpus(*corpus_dir) : render_corpus(config);
  const auto samples = build_dataset(videos, config.samples, config.seed, catalog, config.geometry);

  const fs::path staged = staging_dir(out_dir);
  const auto records = dataset_records(samples, catalog.hash());
  for (std::size_t i = 0; i < samples.size(); ++i) write_clip(staged / records[i].clip_path, samples[i].clip);
  write_manifest(staged / "manifest.tsv", records);
  replace_directory(staged, out_dir);
}

std::vector<Example> load_examples(const fs::path& manifest_path, const PoolGrid& pool) {
  const fs::path base = manifest_path.parent_path();
  std::vector<Example> out;
  for (const auto& r : read_manifest(manifest_path))
    out.push_back({pool_clip(read_clip(base / r.clip_path), pool), {r.spatial_class, r.temporal_class}});
  return out;
}

std::vector<Example> to_examples(const std::vector<LabeledSample>& samples, const PoolGrid& pool) {
  std::vector<Example> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({pool_clip(s.clip, pool), s.labels});
  return out;
}

TrainResult fit_probe(const RunConfig& config, const std::vector<Example>& data, int channels) {
  const TaskCatalog catalog = make_catalog(config.catalog);
  if (config.hidden <= 0) fail(ErrorKind::BadConfig, "hidden must be positive");
  ProbeModel model = ProbeModel::init(config.pool.input_dim(channels), static_cast<std::size_t>(config.hidden),
                                      catalog.spatial_count(), catalog.temporal_count(),
                                      derive_seed(config.seed, "probe-init", 0));
  TrainConfig tc = config.train;
  tc.seed = derive_seed(config.seed, "train", 0);
  return train(std::move(model), data, tc);
}

std::string history_table(const std::vector<EpochStats>& history) {
  std::string out = "epoch\tloss\tspatial_acc\ttemporal_acc\n";
  for (const auto& h : history)
    out += std::to_string(h.epoch) + '\t' + fixed(h.loss) + '\t' + fixed(h.spatial_accuracy) + '\t' +
           fixed(h.temporal_accuracy) + '\n';
  return out;
}

TrainResult train_probe(const RunConfig& config, const fs::path& manifest_path, const fs::path& out_dir) {
  const TaskCatalog catalog = make_catalog(config.catalog);
  const auto records = read_manifest(manifest_path);
  if (records.empty()) fail(ErrorKind::InvalidArgument, "manifest has no samples");
  if (records.front().catalog_hash != catalog.hash())
    fail(ErrorKind::CatalogMismatch, "manifest catalog " + hex64(records.front().catalog_hash) +
                                         " does not match the config catalog " + hex64(catalog.hash()));
  const int channels = read_clip(manifest_path.parent_path() / records.front().clip_path).frames[0].channels;
  const auto data = load_examples(manifest_path, config.pool);
  TrainResult result = fit_probe(config, data, channels);

  const fs::path staged = staging_dir(out_dir);
  save_checkpoint(staged / "checkpoint.v3sp", {result.model, catalog.hash(), config.pool, channels});
  write_file_atomic(staged / "history.tsv", history_table(result.history));
  replace_directory(staged, out_dir);
  return result;
}

GradCheckReport gradcheck(std::size_t configurations, std::uint64_t seed) {
  GradCheckReport worst;
  for (std::size_t c = 0; c < configurations; ++c) {
    Rng rng(derive_seed(seed, "gradcheck", c));
    const auto in = static_cast<std::size_t>(rng.uniform_int(2, 12));
    const auto hidden = static_cast<std::size_t>(rng.uniform_int(2, 10));
    const auto ns = static_cast<std::size_t>(rng.uniform_int(2, 7));
    const auto nt = static_cast<std::size_t>(rng.uniform_int(2, 7));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const double decay = rng.uniform01() < 0.5 ? 0.0 : 0.01;
    const ProbeModel model = ProbeModel::init(in, hidden, ns, nt, rng.next());
    std::vector<Example> batch(n);
    for (auto& ex : batch) {
      ex.input.resize(static_cast<Eigen::Index>(in));
      for (Eigen::Index i = 0; i < ex.input.size(); ++i) ex.input(i) = rng.uniform01();
      ex.labels = {static_cast<std::size_t>(rng.uniform_int(0, ns - 1)),
                   static_cast<std::size_t>(rng.uniform_int(0, nt - 1))};
    }
    const GradCheckReport r = gradient_check(model, batch, decay);
    worst.max_relative_error = std::max(worst.max_relative_error, r.max_relative_error);
    worst.parameters_checked += r.parameters_checked;
  }
  return worst;
}

std::vector<RetrievalRow> retrieval_report(const ProbeModel& model, const std::vector<Example>& gallery,
                                           const std::vector<Example>& queries, Head head) {
  std::vector<Eigen::VectorXd> gf, qf;
  std::vector<std::size_t> gl, ql;
  auto label = [head](const Example& e) { return head == Head::Spatial ? e.labels.spatial : e.labels.temporal; };
  for (const auto& e : gallery) {
    gf.push_back(hidden_features(model, e.input));
    gl.push_back(label(e));
  }
  for (const auto& e : queries) {
    qf.push_back(hidden_features(model, e.input));
    ql.push_back(label(e));
  }
  // All-zero ReLU features get a tiny constant direction so cosine is defined.
  for (auto* set : {&gf, &qf})
    for (auto& f : *set)
      if (f.norm() == 0.0) f = Eigen::VectorXd::Constant(f.size(), 1e-12);

  std::vector<RetrievalRow> rows;
  std::size_t depth = 0;
  for (std::size_t k : {1, 5, 10, 20, 50})
    if (k <= gf.size()) depth = k;
  if (depth == 0) fail(ErrorKind::EmptyGallery, "gallery is empty");
  const auto retrieved = topk_retrieval(qf, gf, depth);
  for (std::size_t k : {1, 5, 10, 20, 50})
    if (k <= depth) rows.push_back({k, recall_at_k(retrieved, ql, gl, k)});
  return rows;
}

std::string retrieval_table(const std::vector<RetrievalRow>& rows) {
  std::string out = "k\trecall\n";
  for (const auto& r : rows) out += std::to_string(r.k) + '\t' + fixed(r.recall) + '\n';
  return out;
}

std::string classification_report(const ProbeModel& model, const std::vector<Example>& data,
                                  const TaskCatalog& catalog) {
  std::vector<std::size_t> ps, pt, ys, yt;
  for (const auto& e : data) {
    const LabelPair p = predict(model, e.input);
    ps.push_back(p.spatial);
    pt.push_back(p.temporal);
    ys.push_back(e.labels.spatial);
    yt.push_back(e.labels.temporal);
  }
  std::ostringstream out;
  auto emit = [&out](const char* name, const ConfusionMatrix& m, auto&& class_name) {
    out << "# " << name << " accuracy\t" << fixed(accuracy(m)) << "\n";
    out << "true\\pred";
    for (std::size_t c = 0; c < m.size(); ++c) out << '\t' << c;
    out << "\n";
    for (std::size_t r = 0; r < m.size(); ++r) {
      out << r;
      for (auto v : m[r]) out << '\t' << v;
      out << '\t' << class_name(r) << "\n";
    }
  };
  emit("spatial", confusion_matrix(ps, ys, catalog.spatial_count()),
       [&](std::size_t i) { return to_string(catalog.spatial[i]); });
  out << "\n";
  emit("temporal", confusion_matrix(pt, yt, catalog.temporal_count()),
       [&](std::size_t i) { return to_string(catalog.temporal[i]); });
  return out.str();
}

Clip transform_file(const RunConfig& config, const fs::path& in, const SpatialSpec& spatial,
                    const TemporalSpec& temporal, std::size_t start) {
  return transform_clip(read_clip(in), spatial, temporal, start, config.geometry);
}

}  // namespace v3s::cli
