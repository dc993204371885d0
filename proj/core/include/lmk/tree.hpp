#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lmk/geometry.hpp"
#include "lmk/image.hpp"
#include "lmk/rng.hpp"

namespace lmk {

/// Rounds a [-1,+1] coordinate to signed 8-bit fixed point (q decodes to
/// q/127). Quantization happens before split evaluation, so training and
/// inference always run the exact same tests.
inline std::int8_t quantize_unit(double v) {
  long q = std::lround(v * 127.0);
  if (q < -127) q = -127;
  if (q > 127) q = 127;
  return static_cast<std::int8_t>(q);
}

/// One pixel-comparison test: two locations in the region frame, each
/// coordinate stored as 8-bit fixed point.
struct BinaryTestParams {
  std::int8_t u1 = 0;
  std::int8_t v1 = 0;
  std::int8_t u2 = 0;
  std::int8_t v2 = 0;

  NormLocation first() const { return {u1 / 127.0, v1 / 127.0}; }
  NormLocation second() const { return {u2 / 127.0, v2 / 127.0}; }

  friend constexpr bool operator==(const BinaryTestParams&, const BinaryTestParams&) = default;
};

inline int apply_test(const BinaryTestParams& t, const GrayImage& img, const Region& region) {
  return binary_test(img, region, t.first(), t.second());
}

/// Complete depth-limited regression tree. Internal nodes are stored in heap
/// order (children of i at 2i+1, 2i+2); every root-to-leaf path has exactly
/// `depth` tests.
struct RegressionTree {
  int depth = 0;
  std::vector<BinaryTestParams> tests;  // 2^depth - 1
  std::vector<Vec2f> leaves;            // 2^depth

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

/// One annotated training record: the target is the landmark position in the
/// normalized frame of `region`. The pointed-to image must outlive the
/// sample.
struct TrainSample {
  const GrayImage* image = nullptr;
  Region region;
  Vec2 target;
};

/// Routes the image through the tree (bit 0 -> left) and returns the reached
/// leaf vector. Exactly `depth` pixel-pair reads, no allocation.
Vec2 traverse(const RegressionTree& tree, const GrayImage& img, const Region& region);

/// Split quality: sum over both clusters of squared distances to the cluster
/// mean. Empty clusters contribute zero. Summation is in input order.
double cluster_cost(std::span<const Vec2> c0, std::span<const Vec2> c1);

struct SplitSelection {
  std::size_t best_index = 0;
  double best_cost = 0.0;
  std::vector<std::uint32_t> left;   // indices of bit-0 samples, input order
  std::vector<std::uint32_t> right;  // indices of bit-1 samples, input order
};

/// Evaluates every candidate test on every sample and returns the one with
/// the smallest cluster cost (ties: lowest candidate index), plus the sample
/// partition it induces. Candidate costs may be computed on n_threads
/// workers; the result is identical to sequential evaluation.
SplitSelection select_test(std::span<const TrainSample> samples,
                           std::span<const BinaryTestParams> candidates, int n_threads = 1);

namespace detail {
SplitSelection select_test_indexed(std::span<const TrainSample> samples,
                                   std::span<const std::uint32_t> subset,
                                   std::span<const BinaryTestParams> candidates, int n_threads);
}  // namespace detail

/// Fresh candidate tests: per candidate, draws l1.u, l1.v, l2.u, l2.v in that
/// order, each uniform on [-1,+1], then quantizes. This draw order is a
/// compatibility contract: tree growth consumes the generator exactly this
/// way at every internal node.
std::vector<BinaryTestParams> draw_candidate_tests(Rng& rng, int n_candidates);

/// Grows a complete depth-limited tree: internal nodes in pre-order, each
/// drawing fresh candidates and keeping the best split; leaves hold the mean
/// of the targets that reach them (an empty leaf inherits the nearest
/// ancestor mean). Pure function of (sample order, depth, n_candidates, rng
/// seed); thread count affects wall time only.
RegressionTree grow_tree(std::span<const TrainSample> samples, int depth, int n_candidates,
                         Rng& rng, int n_threads = 1);

}  // namespace lmk
