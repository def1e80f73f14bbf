#include "v3s/evalkit.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "v3s/error.hpp"

namespace v3s {

double cosine_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) fail(ErrorKind::DimensionMismatch, "feature lengths differ");
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) fail(ErrorKind::ZeroVector, "cosine similarity of a zero vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

std::vector<std::vector<std::size_t>> topk_retrieval(std::span<const Eigen::VectorXd> queries,
                                                     std::span<const Eigen::VectorXd> gallery,
                                                     std::size_t k, RetrievalOptions options) {
  if (gallery.empty()) fail(ErrorKind::EmptyGallery, "retrieval against an empty gallery");
  if (options.exclude_self && queries.size() != gallery.size())
    fail(ErrorKind::InvalidArgument, "self exclusion needs queries and gallery to be the same set");
  const std::size_t candidates = gallery.size() - (options.exclude_self ? 1 : 0);
  if (k > candidates)
    fail(ErrorKind::InvalidArgument, "k=" + std::to_string(k) + " exceeds " +
                                         std::to_string(candidates) + " gallery candidates");

  // Normalize once; ranking by the normalized dot product is the cosine ranking.
  std::vector<Eigen::VectorXd> unit(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    const double n = gallery[g].norm();
    if (n == 0.0) fail(ErrorKind::ZeroVector, "gallery item " + std::to_string(g) + " is zero");
    unit[g] = gallery[g] / n;
  }

  std::vector<std::vector<std::size_t>> out(queries.size());
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double qn = queries[q].norm();
    if (qn == 0.0) fail(ErrorKind::ZeroVector, "query " + std::to_string(q) + " is zero");
    if (queries[q].size() != gallery.front().size())
      fail(ErrorKind::DimensionMismatch, "query and gallery feature lengths differ");
    const Eigen::VectorXd uq = queries[q] / qn;
    scored.clear();
    for (std::size_t g = 0; g < gallery.size(); ++g) {
      if (options.exclude_self && g == q) continue;
      scored.emplace_back(uq.dot(unit[g]), g);
    }
    auto better = [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
    out[q].reserve(k);
    for (std::size_t i = 0; i < k; ++i) out[q].push_back(scored[i].second);
  }
  return out;
}

double recall_at_k(const std::vector<std::vector<std::size_t>>& retrievals,
                   std::span<const std::size_t> query_labels,
                   std::span<const std::size_t> gallery_labels, std::size_t k) {
  if (retrievals.size() != query_labels.size())
    fail(ErrorKind::DimensionMismatch, "one label per query required");
  if (retrievals.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t q = 0; q < retrievals.size(); ++q) {
    if (k > retrievals[q].size())
      fail(ErrorKind::InvalidArgument, "k exceeds the retrieval depth");
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t g = retrievals[q][i];
      if (g >= gallery_labels.size()) fail(ErrorKind::DimensionMismatch, "gallery index out of range");
      if (gallery_labels[g] == query_labels[q]) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(retrievals.size());
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> predictions,
                                 std::span<const std::size_t> labels, std::size_t n_classes) {
  if (predictions.size() != labels.size())
    fail(ErrorKind::DimensionMismatch, "predictions and labels differ in length");
  ConfusionMatrix m(n_classes, std::vector<std::size_t>(n_classes, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes || predictions[i] >= n_classes)
      fail(ErrorKind::InvalidArgument, "class id out of range");
    ++m[labels[i]][predictions[i]];
  }
  return m;
}

double accuracy(const ConfusionMatrix& matrix) {
  std::size_t total = 0, trace = 0;
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    total += std::accumulate(matrix[r].begin(), matrix[r].end(), std::size_t{0});
    if (r < matrix[r].size()) trace += matrix[r][r];
  }
  return total == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(total);
}

}  // namespace v3s
