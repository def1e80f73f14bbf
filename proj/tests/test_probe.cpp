#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "v3s/error.hpp"
#include "v3s/probe.hpp"
#include "v3s/rng.hpp"

using namespace v3s;
using Eigen::VectorXd;

namespace {

std::vector<Example> random_batch(std::size_t n, std::size_t dim, std::size_t ns, std::size_t nt,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Example> out(n);
  for (auto& e : out) {
    e.input = VectorXd(dim);
    for (Eigen::Index i = 0; i < e.input.size(); ++i) e.input[i] = rng.uniform01();
    e.labels = {static_cast<std::size_t>(rng.uniform_int(0, ns - 1)),
                static_cast<std::size_t>(rng.uniform_int(0, nt - 1))};
  }
  return out;
}

// Plain loops, no Eigen products.
Logits naive_forward(const ProbeModel& m, const VectorXd& x) {
  const auto H = m.hidden_dim();
  std::vector<double> h(H);
  for (std::size_t j = 0; j < H; ++j) {
    double z = m.trunk_b[j];
    for (std::size_t i = 0; i < m.input_dim(); ++i) z += m.trunk_w(i, j) * x[i];
    h[j] = z > 0 ? z : 0;
  }
  auto head = [&](const Eigen::MatrixXd& w, const VectorXd& b) {
    VectorXd out(w.cols());
    for (Eigen::Index k = 0; k < w.cols(); ++k) {
      double z = b[k];
      for (std::size_t j = 0; j < H; ++j) z += w(j, k) * h[j];
      out[k] = z;
    }
    return out;
  };
  return {head(m.spatial_w, m.spatial_b), head(m.temporal_w, m.temporal_b)};
}

double max_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Forward, ZeroWeightsGiveZeroLogits) {
  const ProbeModel m = ProbeModel::zeros(6, 4, 3, 5);
  const Logits l = forward(m, VectorXd::Ones(6));
  EXPECT_EQ(l.spatial, VectorXd::Zero(3));
  EXPECT_EQ(l.temporal, VectorXd::Zero(5));
}

TEST(Forward, OneHotSelectsWeightRows) {
  ProbeModel m = ProbeModel::zeros(3, 3, 2, 2);
  m.trunk_w = Eigen::MatrixXd::Identity(3, 3);
  m.spatial_w << 1, 2, 3, 4, 5, 6;
  m.temporal_w << -1, 7, 0.5, 0, 2, 2;
  VectorXd x = VectorXd::Zero(3);
  x[1] = 1;
  const Logits l = forward(m, x);
  EXPECT_EQ(l.spatial, m.spatial_w.row(1).transpose());
  EXPECT_EQ(l.temporal, m.temporal_w.row(1).transpose());
}

TEST(Forward, MatchesNaiveRecomputation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProbeModel m = ProbeModel::init(17, 9, 5, 4, seed);
    const auto batch = random_batch(3, 17, 5, 4, seed + 100);
    for (const auto& e : batch) {
      const Logits a = forward(m, e.input), b = naive_forward(m, e.input);
      EXPECT_LT(max_abs(a.spatial - b.spatial), 1e-12);
      EXPECT_LT(max_abs(a.temporal - b.temporal), 1e-12);
    }
  }
}

TEST(Forward, DimensionMismatch) {
  const ProbeModel m = ProbeModel::zeros(6, 4, 3, 5);
  try {
    forward(m, VectorXd::Zero(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Init, BoundedByFanIn) {
  const ProbeModel m = ProbeModel::init(64, 16, 19, 11, 3);
  EXPECT_LE(m.trunk_w.cwiseAbs().maxCoeff(), 1 / 8.0);
  EXPECT_LE(m.spatial_w.cwiseAbs().maxCoeff(), 1 / 4.0);
  EXPECT_GT(m.trunk_w.cwiseAbs().maxCoeff(), 0.1);
  EXPECT_EQ(m, ProbeModel::init(64, 16, 19, 11, 3));
  EXPECT_EQ(m.parameter_count(), 64u * 16 + 16 + 16 * 19 + 19 + 16 * 11 + 11);
}

TEST(Softmax, Examples) {
  EXPECT_EQ(softmax(VectorXd::Zero(2)), VectorXd::Constant(2, 0.5));
  const VectorXd big = softmax((VectorXd(2) << 1000, 0).finished());
  EXPECT_TRUE(big.allFinite());
  EXPECT_NEAR(big[0], 1.0, 1e-15);
  EXPECT_LT(big[1], 1e-300);

  const VectorXd p = softmax((VectorXd(3) << 1, 2, 3).finished());
  long double z = std::exp(1.0L) + std::exp(2.0L) + std::exp(3.0L);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], double(std::exp(static_cast<long double>(i + 1)) / z), 1e-12);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST(CrossEntropy, Examples) {
  EXPECT_EQ(cross_entropy((VectorXd(2) << 1, 0).finished(), 0), 0.0);
  EXPECT_NEAR(cross_entropy(VectorXd::Constant(7, 1.0 / 7), 3), std::log(7.0), 1e-12);
  EXPECT_NEAR(cross_entropy((VectorXd(3) << 0.7, 0.2, 0.1).finished(), 1), 1.6094379124341003, 1e-12);
  EXPECT_NEAR(cross_entropy((VectorXd(2) << 1, 0).finished(), 1), -std::log(1e-12), 1e-9);
}

TEST(JointLoss, Examples) {
  ProbeModel m = ProbeModel::zeros(4, 3, 19, 11);
  Example e{VectorXd::Ones(4), {2, 5}};
  EXPECT_NEAR(joint_loss(m, e), std::log(19.0) + std::log(11.0), 1e-12);

  m.spatial_b[2] = 1000;
  m.temporal_b[5] = 1000;
  EXPECT_NEAR(joint_loss(m, e), 0.0, 1e-12);

  const ProbeModel r = ProbeModel::init(8, 5, 4, 3, 9);
  for (const auto& x : random_batch(5, 8, 4, 3, 2)) {
    const Logits l = forward(r, x.input);
    const double expected = cross_entropy(softmax(l.spatial), x.labels.spatial) +
                            cross_entropy(softmax(l.temporal), x.labels.temporal);
    EXPECT_NEAR(joint_loss(r, x), expected, 1e-12);
  }
}

TEST(JointLoss, FiniteForExtremeLogits) {
  ProbeModel m = ProbeModel::zeros(2, 2, 2, 2);
  m.spatial_b << 1e6, -1e6;
  m.temporal_b << -1e6, 1e6;
  EXPECT_TRUE(std::isfinite(joint_loss(m, Example{VectorXd::Zero(2), {1, 0}})));
}

TEST(Grad, ZeroModelBiasClosedForm) {
  const ProbeModel m = ProbeModel::zeros(5, 3, 4, 3);
  std::vector<Example> batch{{VectorXd::Zero(5), {0, 2}}, {VectorXd::Zero(5), {3, 2}}, {VectorXd::Zero(5), {0, 1}}};
  const Gradient g = grad(m, batch);
  VectorXd expect_s = VectorXd::Constant(4, 0.25), expect_t = VectorXd::Constant(3, 1.0 / 3);
  expect_s[0] -= 2.0 / 3;
  expect_s[3] -= 1.0 / 3;
  expect_t[2] -= 2.0 / 3;
  expect_t[1] -= 1.0 / 3;
  EXPECT_LT(max_abs(g.grad.spatial_b - expect_s), 1e-15);
  EXPECT_LT(max_abs(g.grad.temporal_b - expect_t), 1e-15);
  EXPECT_EQ(g.grad.trunk_w, Eigen::MatrixXd::Zero(5, 3));
}

TEST(Grad, MatchesFiniteDifferencesOnRandomConfigurations) {
  Rng rng(99);
  for (int config = 0; config < 24; ++config) {
    const auto in = static_cast<std::size_t>(rng.uniform_int(1, 12));
    const auto hidden = static_cast<std::size_t>(rng.uniform_int(1, 8));
    const auto ns = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const auto nt = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const double wd = config % 3 == 0 ? 0.01 : 0.0;
    const ProbeModel m = ProbeModel::init(in, hidden, ns, nt, rng.next());
    const auto batch = random_batch(n, in, ns, nt, rng.next());
    const GradCheckReport r = gradient_check(m, batch, wd);
    EXPECT_LT(r.max_relative_error, 1e-4) << "config " << config;
    EXPECT_EQ(r.parameters_checked, m.parameter_count());
  }
}

TEST(Grad, DuplicatedBatchHasTheSameGradient) {
  const ProbeModel m = ProbeModel::init(6, 4, 3, 3, 5);
  auto batch = random_batch(4, 6, 3, 3, 6);
  const Gradient once = grad(m, batch);
  const auto copy = batch;
  batch.insert(batch.end(), copy.begin(), copy.end());
  const Gradient twice = grad(m, batch);
  auto a = once.grad.blocks();
  auto b = twice.grad.blocks();
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i) EXPECT_NEAR(a[k][i], b[k][i], 1e-14);
  EXPECT_NEAR(once.objective, twice.objective, 1e-14);
}

TEST(Grad, EmptyBatchRejected) {
  const ProbeModel m = ProbeModel::zeros(2, 2, 2, 2);
  EXPECT_THROW(grad(m, std::span<const Example>{}), Error);
}

TEST(Train, ZeroLearningRateLeavesModelUnchanged) {
  const ProbeModel m = ProbeModel::init(10, 6, 4, 3, 1);
  const auto data = random_batch(20, 10, 4, 3, 2);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 3;
  const TrainResult r = train(m, data, cfg);
  EXPECT_EQ(r.model, m);
  EXPECT_EQ(r.history.front().loss, r.history.back().loss);
}

TEST(Train, SingleSampleOverfits) {
  const ProbeModel m = ProbeModel::init(16, 8, 19, 11, 4);
  const auto data = random_batch(1, 16, 19, 11, 5);
  TrainConfig cfg;
  cfg.epochs = 200;
  const TrainResult r = train(m, data, cfg);
  ASSERT_EQ(r.history.size(), 201u);
  EXPECT_LT(r.history.back().loss, 0.01);
  EXPECT_EQ(r.history.back().spatial_accuracy, 1.0);
}

TEST(Train, DeterministicUnderFixedSeed) {
  const ProbeModel m = ProbeModel::init(12, 8, 5, 4, 8);
  const auto data = random_batch(70, 12, 5, 4, 9);
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.seed = 31;
  const TrainResult a = train(m, data, cfg), b = train(m, data, cfg);
  EXPECT_EQ(a.model, b.model);
  cfg.seed = 32;
  EXPECT_FALSE(train(m, data, cfg).model == a.model);
}

TEST(Train, LossDecreasesOverFirstFiveEpochs) {
  // Separable data: the label is the index of the largest input block.
  Rng rng(4);
  std::vector<Example> data;
  for (int i = 0; i < 200; ++i) {
    Example e;
    e.input = VectorXd::Zero(24);
    const auto s = static_cast<std::size_t>(rng.uniform_int(0, 3));
    const auto t = static_cast<std::size_t>(rng.uniform_int(0, 2));
    for (int k = 0; k < 24; ++k) e.input[k] = 0.2 * rng.uniform01();
    for (int k = 0; k < 3; ++k) e.input[s * 3 + k] += 0.8;
    for (int k = 0; k < 4; ++k) e.input[12 + t * 4 + k] += 0.8;
    e.labels = {s, t};
    data.push_back(e);
  }
  TrainConfig cfg;
  cfg.epochs = 5;
  const TrainResult r = train(ProbeModel::init(24, 16, 4, 3, 2), data, cfg);
  ASSERT_EQ(r.history.size(), 6u);
  for (int e = 1; e <= 5; ++e) EXPECT_LE(r.history[e].loss, r.history[e - 1].loss + 1e-12) << e;
  EXPECT_LT(r.history[5].loss, r.history[0].loss);
  EXPECT_EQ(r.history[0].epoch, 0);
}

TEST(PoolClip, AveragesBins) {
  Clip clip;
  for (int t = 0; t < 4; ++t) {
    Frame f(4, 4, 1, 0.0f);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) f.at(i, j) = float(t) / 4 + (j >= 2 ? 0.125f : 0.0f);
    clip.frames.push_back(f);
  }
  const VectorXd v = pool_clip(clip, PoolGrid{2, 1, 2});
  ASSERT_EQ(v.size(), 4);
  EXPECT_NEAR(v[0], 0.125, 1e-12);
  EXPECT_NEAR(v[1], 0.25, 1e-12);
  EXPECT_NEAR(v[2], 0.625, 1e-12);
  EXPECT_NEAR(v[3], 0.75, 1e-12);
  EXPECT_THROW(pool_clip(clip, PoolGrid{8, 1, 1}), Error);
}
