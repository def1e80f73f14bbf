#include "v3s/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "v3s/error.hpp"
#include "v3s/rng.hpp"

namespace v3s {

namespace {

// Bin b of n over an axis of length len covers [b*len/n, (b+1)*len/n).
std::pair<int, int> bin_range(int b, int n, int len) { return {b * len / n, (b + 1) * len / n}; }

void fill_uniform(Rng& rng, Eigen::MatrixXd& m, double bound) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
}

void fill_uniform(Rng& rng, Eigen::VectorXd& v, double bound) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(-bound, bound);
}

void check_input(const ProbeModel& model, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != model.input_dim())
    fail(ErrorKind::DimensionMismatch, "input has " + std::to_string(x.size()) + " values, model expects " +
                                           std::to_string(model.input_dim()));
}

// Column-wise max-subtracted softmax.
Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) p.col(c) = softmax(logits.col(c));
  return p;
}

struct BatchForward {
  Eigen::MatrixXd inputs;  // input_dim x B
  Eigen::MatrixXd pre;     // hidden x B
  Eigen::MatrixXd hidden;
  Eigen::MatrixXd p_spatial;
  Eigen::MatrixXd p_temporal;
};

BatchForward forward_batch(const ProbeModel& m, std::span<const Example> batch) {
  BatchForward f;
  const auto n = static_cast<Eigen::Index>(batch.size());
  f.inputs.resize(static_cast<Eigen::Index>(m.input_dim()), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    check_input(m, batch[i].input);
    f.inputs.col(i) = batch[i].input;
  }
  f.pre = (m.trunk_w.transpose() * f.inputs).colwise() + m.trunk_b;
  f.hidden = f.pre.cwiseMax(0.0);
  f.p_spatial = softmax_columns((m.spatial_w.transpose() * f.hidden).colwise() + m.spatial_b);
  f.p_temporal = softmax_columns((m.temporal_w.transpose() * f.hidden).colwise() + m.temporal_b);
  return f;
}

double decay_term(const ProbeModel& m, double weight_decay) {
  if (weight_decay == 0.0) return 0.0;
  return 0.5 * weight_decay *
         (m.trunk_w.squaredNorm() + m.spatial_w.squaredNorm() + m.temporal_w.squaredNorm());
}

void check_labels(const ProbeModel& m, const LabelPair& y) {
  if (y.spatial >= m.n_spatial() || y.temporal >= m.n_temporal())
    fail(ErrorKind::DimensionMismatch, "label outside the model's class range");
}

}  // namespace

Eigen::VectorXd pool_clip(const Clip& clip, const PoolGrid& grid) {
  if (clip.empty()) fail(ErrorKind::DimensionMismatch, "empty clip");
  const Frame& first = clip.frames.front();
  const int T = static_cast<int>(clip.length()), H = first.height, W = first.width, C = first.channels;
  if (grid.time <= 0 || grid.height <= 0 || grid.width <= 0 || T < grid.time || H < grid.height ||
      W < grid.width)
    fail(ErrorKind::DimensionMismatch, "clip smaller than the pooling grid");

  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.input_dim(C)));
  Eigen::Index k = 0;
  for (int bt = 0; bt < grid.time; ++bt) {
    const auto [t0, t1] = bin_range(bt, grid.time, T);
    for (int by = 0; by < grid.height; ++by) {
      const auto [y0, y1] = bin_range(by, grid.height, H);
      for (int bx = 0; bx < grid.width; ++bx) {
        const auto [x0, x1] = bin_range(bx, grid.width, W);
        const double count = double(t1 - t0) * (y1 - y0) * (x1 - x0);
        for (int ch = 0; ch < C; ++ch) {
          double sum = 0;
          for (int t = t0; t < t1; ++t) {
            const Frame& f = clip.frames[t];
            if (!f.same_shape(first)) fail(ErrorKind::DimensionMismatch, "clip frames differ in shape");
            for (int y = y0; y < y1; ++y)
              for (int x = x0; x < x1; ++x) sum += f.at(y, x, ch);
          }
          out(k++) = sum / count;
        }
      }
    }
  }
  return out;
}

ProbeModel ProbeModel::zeros(std::size_t input_dim, std::size_t hidden, std::size_t n_spatial,
                             std::size_t n_temporal) {
  const auto in = static_cast<Eigen::Index>(input_dim), h = static_cast<Eigen::Index>(hidden);
  const auto ns = static_cast<Eigen::Index>(n_spatial), nt = static_cast<Eigen::Index>(n_temporal);
  ProbeModel m;
  m.trunk_w = Eigen::MatrixXd::Zero(in, h);
  m.trunk_b = Eigen::VectorXd::Zero(h);
  m.spatial_w = Eigen::MatrixXd::Zero(h, ns);
  m.spatial_b = Eigen::VectorXd::Zero(ns);
  m.temporal_w = Eigen::MatrixXd::Zero(h, nt);
  m.temporal_b = Eigen::VectorXd::Zero(nt);
  return m;
}

ProbeModel ProbeModel::init(std::size_t input_dim, std::size_t hidden, std::size_t n_spatial,
                            std::size_t n_temporal, std::uint64_t seed) {
  if (input_dim == 0 || hidden == 0 || n_spatial == 0 || n_temporal == 0)
    fail(ErrorKind::DimensionMismatch, "probe dimensions must be positive");
  ProbeModel m = zeros(input_dim, hidden, n_spatial, n_temporal);
  Rng rng(seed);
  const double trunk_bound = 1.0 / std::sqrt(double(input_dim));
  const double head_bound = 1.0 / std::sqrt(double(hidden));
  fill_uniform(rng, m.trunk_w, trunk_bound);
  fill_uniform(rng, m.trunk_b, trunk_bound);
  fill_uniform(rng, m.spatial_w, head_bound);
  fill_uniform(rng, m.spatial_b, head_bound);
  fill_uniform(rng, m.temporal_w, head_bound);
  fill_uniform(rng, m.temporal_b, head_bound);
  return m;
}

std::vector<std::span<double>> ProbeModel::blocks() {
  auto s = [](auto& e) { return std::span<double>(e.data(), static_cast<std::size_t>(e.size())); };
  return {s(trunk_w), s(trunk_b), s(spatial_w), s(spatial_b), s(temporal_w), s(temporal_b)};
}

std::vector<std::span<const double>> ProbeModel::blocks() const {
  auto s = [](const auto& e) {
    return std::span<const double>(e.data(), static_cast<std::size_t>(e.size()));
  };
  return {s(trunk_w), s(trunk_b), s(spatial_w), s(spatial_b), s(temporal_w), s(temporal_b)};
}

std::size_t ProbeModel::parameter_count() const {
  std::size_t n = 0;
  for (auto b : blocks()) n += b.size();
  return n;
}

Eigen::VectorXd hidden_features(const ProbeModel& model, const Eigen::VectorXd& x) {
  check_input(model, x);
  return ((model.trunk_w.transpose() * x) + model.trunk_b).cwiseMax(0.0);
}

Logits forward(const ProbeModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd h = hidden_features(model, x);
  return {model.spatial_w.transpose() * h + model.spatial_b,
          model.temporal_w.transpose() * h + model.temporal_b};
}

LabelPair predict(const ProbeModel& model, const Eigen::VectorXd& x) {
  const Logits l = forward(model, x);
  Eigen::Index s = 0, t = 0;
  l.spatial.maxCoeff(&s);
  l.temporal.maxCoeff(&t);
  return {static_cast<std::size_t>(s), static_cast<std::size_t>(t)};
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double mx = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - mx).exp().matrix();
  return e / e.sum();
}

double cross_entropy(const Eigen::VectorXd& probs, std::size_t cls) {
  if (cls >= static_cast<std::size_t>(probs.size()))
    fail(ErrorKind::DimensionMismatch, "class index out of range");
  return -std::log(std::max(probs(static_cast<Eigen::Index>(cls)), kProbabilityFloor));
}

double joint_loss(const ProbeModel& model, const Example& example) {
  check_labels(model, example.labels);
  const Logits l = forward(model, example.input);
  return cross_entropy(softmax(l.spatial), example.labels.spatial) +
         cross_entropy(softmax(l.temporal), example.labels.temporal);
}

double batch_objective(const ProbeModel& model, std::span<const Example> batch, double weight_decay) {
  if (batch.empty()) fail(ErrorKind::InvalidArgument, "empty batch");
  double sum = 0;
  for (const auto& ex : batch) sum += joint_loss(model, ex);
  return sum / static_cast<double>(batch.size()) + decay_term(model, weight_decay);
}

Gradient grad(const ProbeModel& m, std::span<const Example> batch, double weight_decay) {
  if (batch.empty()) fail(ErrorKind::InvalidArgument, "empty batch");
  for (const auto& ex : batch) check_labels(m, ex.labels);
  const BatchForward f = forward_batch(m, batch);
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  Eigen::MatrixXd d_spatial = f.p_spatial;
  Eigen::MatrixXd d_temporal = f.p_temporal;
  double loss = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    const auto ys = static_cast<Eigen::Index>(batch[i].labels.spatial);
    const auto yt = static_cast<Eigen::Index>(batch[i].labels.temporal);
    loss -= std::log(std::max(f.p_spatial(ys, c), kProbabilityFloor));
    loss -= std::log(std::max(f.p_temporal(yt, c), kProbabilityFloor));
    d_spatial(ys, c) -= 1.0;
    d_temporal(yt, c) -= 1.0;
  }
  d_spatial *= inv_n;
  d_temporal *= inv_n;

  Gradient g;
  g.objective = loss * inv_n + decay_term(m, weight_decay);
  g.grad.spatial_w = f.hidden * d_spatial.transpose();
  g.grad.spatial_b = d_spatial.rowwise().sum();
  g.grad.temporal_w = f.hidden * d_temporal.transpose();
  g.grad.temporal_b = d_temporal.rowwise().sum();

  const Eigen::MatrixXd d_hidden = m.spatial_w * d_spatial + m.temporal_w * d_temporal;
  const Eigen::MatrixXd d_pre = d_hidden.cwiseProduct((f.pre.array() > 0.0).cast<double>().matrix());
  g.grad.trunk_w = f.inputs * d_pre.transpose();
  g.grad.trunk_b = d_pre.rowwise().sum();

  if (weight_decay != 0.0) {
    g.grad.trunk_w += weight_decay * m.trunk_w;
    g.grad.spatial_w += weight_decay * m.spatial_w;
    g.grad.temporal_w += weight_decay * m.temporal_w;
  }
  return g;
}

GradCheckReport gradient_check(const ProbeModel& model, std::span<const Example> batch,
                               double weight_decay, double epsilon) {
  const Gradient analytic = grad(model, batch, weight_decay);
  ProbeModel probe = model;
  auto params = probe.blocks();
  const auto grads = analytic.grad.blocks();
  GradCheckReport report;
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].size(); ++i) {
      const double saved = params[b][i];
      params[b][i] = saved + epsilon;
      const double up = batch_objective(probe, batch, weight_decay);
      params[b][i] = saved - epsilon;
      const double down = batch_objective(probe, batch, weight_decay);
      params[b][i] = saved;
      const double numeric = (up - down) / (2 * epsilon);
      const double a = grads[b][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
      report.max_relative_error = std::max(report.max_relative_error, std::abs(a - numeric) / denom);
      ++report.parameters_checked;
    }
  }
  return report;
}

void validate(const TrainConfig& c) {
  if (!(c.learning_rate >= 0.0)) fail(ErrorKind::BadConfig, "learning rate must be non-negative");
  if (!(c.momentum >= 0.0 && c.momentum < 1.0)) fail(ErrorKind::BadConfig, "momentum must be in [0,1)");
  if (c.batch_size == 0) fail(ErrorKind::BadConfig, "batch size must be positive");
  if (c.epochs < 0) fail(ErrorKind::BadConfig, "epochs must be non-negative");
  if (!(c.weight_decay >= 0.0)) fail(ErrorKind::BadConfig, "weight decay must be non-negative");
}

EpochStats evaluate(const ProbeModel& model, std::span<const Example> data) {
  EpochStats s;
  if (data.empty()) return s;
  std::size_t hit_s = 0, hit_t = 0;
  double loss = 0;
  for (const auto& ex : data) {
    check_labels(model, ex.labels);
    const Logits l = forward(model, ex.input);
    loss += cross_entropy(softmax(l.spatial), ex.labels.spatial) +
            cross_entropy(softmax(l.temporal), ex.labels.temporal);
    Eigen::Index ps = 0, pt = 0;
    l.spatial.maxCoeff(&ps);
    l.temporal.maxCoeff(&pt);
    hit_s += static_cast<std::size_t>(ps) == ex.labels.spatial;
    hit_t += static_cast<std::size_t>(pt) == ex.labels.temporal;
  }
  const double n = static_cast<double>(data.size());
  s.loss = loss / n;
  s.spatial_accuracy = hit_s / n;
  s.temporal_accuracy = hit_t / n;
  return s;
}

TrainResult train(ProbeModel model, std::span<const Example> data, const TrainConfig& config) {
  validate(config);
  if (data.empty()) fail(ErrorKind::InvalidArgument, "empty training set");

  TrainResult result;
  result.history.push_back(evaluate(model, data));

  ProbeModel velocity = ProbeModel::zeros(model.input_dim(), model.hidden_dim(), model.n_spatial(),
                                          model.n_temporal());
  std::vector<std::size_t> order(data.size());
  std::vector<Example> batch;
  batch.reserve(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);

    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const Gradient g = grad(model, batch, config.weight_decay);

      auto params = model.blocks();
      auto vel = velocity.blocks();
      const auto gr = g.grad.blocks();
      for (std::size_t b = 0; b < params.size(); ++b)
        for (std::size_t k = 0; k < params[b].size(); ++k) {
          vel[b][k] = config.momentum * vel[b][k] - config.learning_rate * gr[b][k];
          params[b][k] += vel[b][k];
        }
    }
    EpochStats stats = evaluate(model, data);
    stats.epoch = epoch;
    result.history.push_back(stats);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace v3s
