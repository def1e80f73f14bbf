#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "v3s/error.hpp"
#include "v3s/evalkit.hpp"
#include "v3s/rng.hpp"

using namespace v3s;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

std::vector<VectorXd> random_vectors(std::size_t n, int dim, Rng& rng) {
  std::vector<VectorXd> out(n, VectorXd(dim));
  for (auto& v : out)
    for (int i = 0; i < dim; ++i) v[i] = rng.uniform(-1, 1);
  return out;
}

// Full stable sort by descending cosine, computed with the public similarity.
std::vector<std::size_t> brute_force(const VectorXd& q, const std::vector<VectorXd>& gallery, std::size_t k,
                                     std::optional<std::size_t> skip = std::nullopt) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < gallery.size(); ++i)
    if (i != skip) scored.emplace_back(cosine_similarity(q, gallery[i]), i);
  std::stable_sort(scored.begin(), scored.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Cosine, Examples) {
  EXPECT_NEAR(cosine_similarity(vec({0.3, -2, 5}), vec({0.3, -2, 5})), 1.0, 1e-15);
  EXPECT_EQ(cosine_similarity(vec({1, 0}), vec({0, 1})), 0.0);
  EXPECT_NEAR(cosine_similarity(vec({1, 0}), vec({1, 1})), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(cosine_similarity(vec({1, 2}), vec({-2, -4})), -1.0, 1e-15);
}

TEST(Cosine, Errors) {
  EXPECT_EQ(kind_of([] { cosine_similarity(vec({0, 0}), vec({1, 0})); }), ErrorKind::ZeroVector);
  EXPECT_EQ(kind_of([] { cosine_similarity(vec({1, 0}), vec({1, 0, 0})); }), ErrorKind::DimensionMismatch);
}

TEST(TopK, DuplicateRanksFirst) {
  Rng rng(1);
  auto gallery = random_vectors(10, 5, rng);
  const VectorXd q = gallery[6];
  const auto r = topk_retrieval(std::span(&q, 1), gallery, 3);
  EXPECT_EQ(r[0][0], 6u);
}

TEST(TopK, FullDepthIsPermutation) {
  Rng rng(2);
  auto gallery = random_vectors(12, 4, rng);
  auto queries = random_vectors(3, 4, rng);
  for (auto& row : topk_retrieval(queries, gallery, 12)) {
    std::vector<std::size_t> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> all(12);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(sorted, all);
  }
}

TEST(TopK, TiesGoToLowerIndex) {
  std::vector<VectorXd> gallery{vec({0, 1}), vec({2, 0}), vec({1, 0}), vec({5, 0})};
  const VectorXd q = vec({1, 0});
  EXPECT_EQ(topk_retrieval(std::span(&q, 1), gallery, 4)[0], (std::vector<std::size_t>{1, 2, 3, 0}));
}

TEST(TopK, MatchesBruteForceOnAllSmallInstances) {
  Rng rng(3);
  for (std::size_t n = 1; n <= 50; ++n) {
    const int dim = static_cast<int>(rng.uniform_int(1, 6));
    auto gallery = random_vectors(n, dim, rng);
    // Repeat a few vectors so exact ties are exercised.
    if (n > 3) gallery[n - 1] = gallery[1] * 2.0;
    auto queries = random_vectors(5, dim, rng);
    queries.push_back(gallery[0]);
    for (std::size_t k : {std::size_t{1}, (n + 1) / 2, n}) {
      const auto r = topk_retrieval(queries, gallery, k);
      for (std::size_t q = 0; q < queries.size(); ++q) ASSERT_EQ(r[q], brute_force(queries[q], gallery, k)) << n;
    }
  }
}

TEST(TopK, ExcludeSelf) {
  Rng rng(4);
  auto set = random_vectors(20, 3, rng);
  const auto r = topk_retrieval(set, set, 19, {.exclude_self = true});
  for (std::size_t q = 0; q < set.size(); ++q) {
    EXPECT_EQ(std::count(r[q].begin(), r[q].end(), q), 0);
    EXPECT_EQ(r[q], brute_force(set[q], set, 19, q));
  }
  EXPECT_EQ(kind_of([&] { topk_retrieval(set, set, 20, {.exclude_self = true}); }), ErrorKind::InvalidArgument);
}

TEST(TopK, ScalingInvariance) {
  Rng rng(5);
  auto gallery = random_vectors(30, 6, rng);
  auto queries = random_vectors(8, 6, rng);
  const auto before = topk_retrieval(queries, gallery, 10);
  for (auto& g : gallery) g *= 3.75;
  for (auto& q : queries) q *= 0.125;
  EXPECT_EQ(topk_retrieval(queries, gallery, 10), before);
}

TEST(TopK, Errors) {
  std::vector<VectorXd> empty;
  const VectorXd q = vec({1});
  EXPECT_EQ(kind_of([&] { topk_retrieval(std::span(&q, 1), empty, 1); }), ErrorKind::EmptyGallery);
  std::vector<VectorXd> one{vec({1})};
  EXPECT_EQ(kind_of([&] { topk_retrieval(std::span(&q, 1), one, 2); }), ErrorKind::InvalidArgument);
}

TEST(Recall, AllSameAndAllDistinct) {
  Rng rng(6);
  auto set = random_vectors(6, 3, rng);
  const auto r = topk_retrieval(set, set, 3, {.exclude_self = true});
  std::vector<std::size_t> same(6, 4), distinct{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(recall_at_k(r, same, same, 1), 1.0);
  EXPECT_EQ(recall_at_k(r, distinct, distinct, 3), 0.0);
}

TEST(Recall, HandCountedFourQueries) {
  // Gallery labels: [0, 1, 1, 2, 0]
  //   q0 (label 0): [3, 0, 1] -> hit at rank 2
  //   q1 (label 1): [1, 4, 2] -> hit at rank 1
  //   q2 (label 2): [0, 1, 4] -> never
  //   q3 (label 0): [2, 3, 4] -> hit at rank 3
  const std::vector<std::vector<std::size_t>> r{{3, 0, 1}, {1, 4, 2}, {0, 1, 4}, {2, 3, 4}};
  const std::vector<std::size_t> ql{0, 1, 2, 0}, gl{0, 1, 1, 2, 0};
  EXPECT_EQ(recall_at_k(r, ql, gl, 1), 0.25);
  EXPECT_EQ(recall_at_k(r, ql, gl, 2), 0.5);
  EXPECT_EQ(recall_at_k(r, ql, gl, 3), 0.75);
}

TEST(Recall, MonotoneInK) {
  Rng rng(7);
  auto gallery = random_vectors(40, 4, rng);
  auto queries = random_vectors(15, 4, rng);
  std::vector<std::size_t> gl(40), ql(15);
  for (auto& l : gl) l = static_cast<std::size_t>(rng.uniform_int(0, 5));
  for (auto& l : ql) l = static_cast<std::size_t>(rng.uniform_int(0, 5));
  const auto r = topk_retrieval(queries, gallery, 40);
  double prev = 0;
  for (std::size_t k = 1; k <= 40; ++k) {
    const double now = recall_at_k(r, ql, gl, k);
    EXPECT_GE(now, prev);
    prev = now;
  }
  EXPECT_EQ(prev, 1.0);
}

TEST(Confusion, PerfectAndConstantPredictors) {
  const std::vector<std::size_t> labels{0, 1, 2, 0, 1, 2};
  const auto perfect = confusion_matrix(labels, labels, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(perfect[i][j], i == j ? 2u : 0u);
  EXPECT_EQ(accuracy(perfect), 1.0);
  const std::vector<std::size_t> constant(6, 1);
  EXPECT_NEAR(accuracy(confusion_matrix(constant, labels, 3)), 1.0 / 3, 1e-15);
  EXPECT_EQ(accuracy(ConfusionMatrix{}), 0.0);
}

TEST(Confusion, HandComputedFixture) {
  const std::vector<std::size_t> labels{0, 0, 1, 1, 1, 2, 2};
  const std::vector<std::size_t> preds{0, 1, 1, 2, 1, 2, 0};
  const ConfusionMatrix expected{{1, 1, 0}, {0, 2, 1}, {1, 0, 1}};
  const auto m = confusion_matrix(preds, labels, 3);
  EXPECT_EQ(m, expected);
  EXPECT_NEAR(accuracy(m), 4.0 / 7, 1e-15);
  EXPECT_THROW(confusion_matrix(std::vector<std::size_t>{3}, std::vector<std::size_t>{0}, 3), Error);
}
