#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "v3s/frame.hpp"
#include "v3s/pretext.hpp"

namespace v3s {

// Average-pooling grid applied to a clip before it reaches the probe.
struct PoolGrid {
  int time = 4;
  int height = 8;
  int width = 8;

  std::size_t input_dim(int channels) const {
    return static_cast<std::size_t>(time) * height * width * channels;
  }
};

// Clip averaged over a (time x height x width) grid of near-equal bins,
// flattened time-major, then row, column, channel. Throws DimensionMismatch
// when the clip is smaller than the grid along any axis.
Eigen::VectorXd pool_clip(const Clip& clip, const PoolGrid& grid);

struct Example {
  Eigen::VectorXd input;
  LabelPair labels;
};

// Shared ReLU trunk with a spatial head and a temporal head.
//   hidden = relu(trunk_w^T x + trunk_b)
//   logits = head_w^T hidden + head_b
struct ProbeModel {
  Eigen::MatrixXd trunk_w;  // input_dim x hidden
  Eigen::VectorXd trunk_b;
  Eigen::MatrixXd spatial_w;  // hidden x n_spatial
  Eigen::VectorXd spatial_b;
  Eigen::MatrixXd temporal_w;  // hidden x n_temporal
  Eigen::VectorXd temporal_b;

  // All parameters zero.
  static ProbeModel zeros(std::size_t input_dim, std::size_t hidden, std::size_t n_spatial,
                          std::size_t n_temporal);
  // Each layer uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], weights then bias,
  // trunk then spatial then temporal, from Rng(seed).
  static ProbeModel init(std::size_t input_dim, std::size_t hidden, std::size_t n_spatial,
                         std::size_t n_temporal, std::uint64_t seed);

  std::size_t input_dim() const { return static_cast<std::size_t>(trunk_w.rows()); }
  std::size_t hidden_dim() const { return static_cast<std::size_t>(trunk_w.cols()); }
  std::size_t n_spatial() const { return static_cast<std::size_t>(spatial_w.cols()); }
  std::size_t n_temporal() const { return static_cast<std::size_t>(temporal_w.cols()); }

  // Contiguous parameter blocks in the fixed order above.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  std::size_t parameter_count() const;

  friend bool operator==(const ProbeModel&, const ProbeModel&) = default;
};

struct Logits {
  Eigen::VectorXd spatial;
  Eigen::VectorXd temporal;
};

// Throws DimensionMismatch on an input of the wrong length.
Logits forward(const ProbeModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd hidden_features(const ProbeModel& model, const Eigen::VectorXd& x);
LabelPair predict(const ProbeModel& model, const Eigen::VectorXd& x);

// Max-subtracted softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

inline constexpr double kProbabilityFloor = 1e-12;

// -log(max(p[cls], 1e-12)).
double cross_entropy(const Eigen::VectorXd& probs, std::size_t cls);

// Spatial head loss plus temporal head loss.
double joint_loss(const ProbeModel& model, const Example& example);

// Mean joint loss over the batch plus 0.5 * weight_decay * |weights|^2
// (biases are not decayed).
double batch_objective(const ProbeModel& model, std::span<const Example> batch,
                       double weight_decay = 0.0);

struct Gradient {
  ProbeModel grad;  // same layout as the model
  double objective = 0.0;
};

// Analytic gradient of batch_objective. Throws InvalidArgument on an empty batch.
Gradient grad(const ProbeModel& model, std::span<const Example> batch, double weight_decay = 0.0);

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
};

inline constexpr double kGradCheckEpsilon = 1e-5;

// Central differences on every parameter. Relative error per entry is
// |a - n| / max(|a|, |n|, 1e-6).
GradCheckReport gradient_check(const ProbeModel& model, std::span<const Example> batch,
                               double weight_decay = 0.0, double epsilon = kGradCheckEpsilon);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  int epochs = 10;
  std::uint64_t seed = 0;
  double weight_decay = 0.0;
};

void validate(const TrainConfig& config);

struct EpochStats {
  int epoch = 0;  // 0 is the untrained model
  double loss = 0.0;
  double spatial_accuracy = 0.0;
  double temporal_accuracy = 0.0;
};

// Mean joint loss and per-head accuracy over the dataset.
EpochStats evaluate(const ProbeModel& model, std::span<const Example> data);

struct TrainResult {
  ProbeModel model;
  std::vector<EpochStats> history;  // epochs + 1 rows
};

// Minibatch SGD with classical momentum:
//   velocity = momentum * velocity - lr * grad;  param += velocity
// Epoch e shuffles with Rng(derive_seed(seed, "shuffle", e)).
TrainResult train(ProbeModel model, std::span<const Example> data, const TrainConfig& config);

}  // namespace v3s
