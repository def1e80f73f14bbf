// v3s command-line front end. Exit codes: 0 ok, 1 usage, 2 data error,
// 3 numerical failure.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "v3s/clip_file.hpp"
#include "v3s/commands.hpp"
#include "v3s/error.hpp"
#include "v3s/fileio.hpp"

namespace fs = std::filesystem;
using namespace v3s;

namespace {

constexpr double kGradTolerance = 1e-4;

RunConfig config_from(const std::string& path, const std::optional<std::uint64_t>& seed) {
  RunConfig c = path.empty() ? RunConfig{} : load_run_config(path);
  if (seed) c.seed = *seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"V3S spatio-temporal pretext pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool stride_literal = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run config file (defaults when omitted)");
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_flag("--stride-literal", stride_literal, "sample with the printed stride s-1 instead of s");
  };

  std::string out;

  auto* synth = app.add_subcommand("synth", "render a synthetic scene corpus");
  add_common(synth);
  synth->add_option("--out", out, "output directory")->required();

  auto* transform = app.add_subcommand("transform", "apply one spatial/temporal spec pair to a clip");
  add_common(transform);
  std::string in_clip, spatial_text = "identity", temporal_text = "scale:1";
  std::size_t start = 0;
  transform->add_option("--in", in_clip, "input clip file")->required();
  transform->add_option("--out", out, "output clip file")->required();
  transform->add_option("--spatial", spatial_text, "identity | scale:a:b | projection:c:side");
  transform->add_option("--temporal", temporal_text, "scale:s | projection:s1:s2");
  transform->add_option("--start", start, "first source frame");

  auto* make = app.add_subcommand("make-dataset", "build a labeled pretext dataset");
  add_common(make);
  std::string corpus;
  std::optional<std::size_t> samples;
  make->add_option("--videos", corpus, "corpus directory from `synth` (rendered from config if omitted)");
  make->add_option("--samples", samples, "number of samples");
  make->add_option("--out", out, "output directory")->required();

  auto* trainc = app.add_subcommand("train-probe", "train the two-head probe on a manifest");
  add_common(trainc);
  std::string manifest;
  std::optional<int> epochs;
  trainc->add_option("--manifest", manifest, "dataset manifest")->required();
  trainc->add_option("--epochs", epochs, "override epochs");
  trainc->add_option("--out", out, "output directory")->required();

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of the probe gradients");
  add_common(grad);
  std::size_t configurations = 20;
  grad->add_option("--configs", configurations, "random model/batch configurations");

  auto* retr = app.add_subcommand("eval-retrieval", "recall@K of hidden features");
  add_common(retr);
  std::string checkpoint, gallery, queries, head_text = "spatial";
  retr->add_option("--checkpoint", checkpoint)->required();
  retr->add_option("--gallery", gallery, "gallery manifest")->required();
  retr->add_option("--queries", queries, "query manifest")->required();
  retr->add_option("--head", head_text, "label set: spatial | temporal")
      ->check(CLI::IsMember({"spatial", "temporal"}));
  retr->add_option("--out", out, "write the table here as well as stdout");

  auto* rep = app.add_subcommand("report", "confusion matrices and per-head accuracy");
  add_common(rep);
  rep->add_option("--checkpoint", checkpoint)->required();
  rep->add_option("--manifest", manifest)->required();
  rep->add_option("--out", out, "write the report here as well as stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig config = config_from(config_path, seed);
    if (stride_literal) config.geometry.stride = StrideMode::Literal;

    if (*synth) {
      cli::synth(config, out);
      std::cout << "wrote " << config.videos << " videos to " << out << "\n";
    } else if (*transform) {
      const auto spatial = parse_spatial_spec(spatial_text);
      const auto temporal = parse_temporal_spec(temporal_text, config.catalog.clip_length,
                                                config.catalog.stage1_length, config.catalog.stage2_length);
      write_clip(out, cli::transform_file(config, in_clip, spatial, temporal, start));
    } else if (*make) {
      if (samples) config.samples = *samples;
      cli::make_dataset(config, corpus.empty() ? std::nullopt : std::optional<fs::path>(corpus), out);
      std::cout << "wrote " << config.samples << " samples to " << out << "\n";
    } else if (*trainc) {
      if (epochs) config.train.epochs = *epochs;
      const auto result = cli::train_probe(config, manifest, out);
      const EpochStats& last = result.history.back();
      std::printf("trained %d epochs: loss %.6f spatial_acc %.4f temporal_acc %.4f (history in %s)\n", last.epoch,
                  last.loss, last.spatial_accuracy, last.temporal_accuracy, (fs::path(out) / "history.tsv").c_str());
    } else if (*grad) {
      const auto r = cli::gradcheck(configurations, config.seed);
      std::printf("max_relative_error\t%.3e\nparameters_checked\t%zu\n", r.max_relative_error,
                  r.parameters_checked);
      if (!(r.max_relative_error < kGradTolerance)) {
        std::fprintf(stderr, "gradient check failed: %.3e >= %.0e\n", r.max_relative_error, kGradTolerance);
        return 3;
      }
    } else if (*retr || *rep) {
      const TaskCatalog catalog = make_catalog(config.catalog);
      const Checkpoint ck = load_checkpoint(checkpoint, catalog.hash());
      std::string text;
      if (*retr) {
        const auto head = head_text == "temporal" ? cli::Head::Temporal : cli::Head::Spatial;
        text = cli::retrieval_table(cli::retrieval_report(ck.model, cli::load_examples(gallery, ck.pool),
                                                          cli::load_examples(queries, ck.pool), head));
      } else {
        text = cli::classification_report(ck.model, cli::load_examples(manifest, ck.pool), catalog);
      }
      std::cout << text;
      if (!out.empty()) write_file_atomic(out, text);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
