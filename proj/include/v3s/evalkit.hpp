#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace v3s {

// Throws ZeroVector if either argument has zero norm, DimensionMismatch on
// unequal lengths.
double cosine_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct RetrievalOptions {
  // Query i skips gallery item i (queries and gallery are the same set).
  bool exclude_self = false;
};

// For each query, the k gallery indices of highest cosine similarity, ties
// broken by lower index. Throws EmptyGallery, and InvalidArgument when k
// exceeds the number of candidates.
std::vector<std::vector<std::size_t>> topk_retrieval(std::span<const Eigen::VectorXd> queries,
                                                     std::span<const Eigen::VectorXd> gallery,
                                                     std::size_t k, RetrievalOptions options = {});

// Fraction of queries with at least one gallery item of the same label among
// their first k retrievals.
double recall_at_k(const std::vector<std::vector<std::size_t>>& retrievals,
                   std::span<const std::size_t> query_labels,
                   std::span<const std::size_t> gallery_labels, std::size_t k);

// Row = true class, column = predicted class.
using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

ConfusionMatrix confusion_matrix(std::span<const std::size_t> predictions,
                                 std::span<const std::size_t> labels, std::size_t n_classes);

// trace / total; 0 for an empty matrix.
double accuracy(const ConfusionMatrix& matrix);

}  // namespace v3s
