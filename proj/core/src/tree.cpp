#include "lmk/tree.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

#include "lmk/parallel.hpp"

namespace lmk {

Vec2 traverse(const RegressionTree& tree, const GrayImage& img, const Region& region) {
  std::size_t node = 0;
  for (int level = 0; level < tree.depth; ++level) {
    const int bit = apply_test(tree.tests[node], img, region);
    node = 2 * node + 1 + static_cast<std::size_t>(bit);
  }
  const std::size_t n_internal = (std::size_t{1} << tree.depth) - 1;
  return tree.leaves[node - n_internal].to_vec2();
}

namespace {

// Mean then sum of squared deviations, both in input order. select_test must
// reproduce these numbers exactly, so any change here needs a matching one
// there.
double one_cluster_cost(std::span<const Vec2> cluster) {
  if (cluster.empty()) {
    return 0.0;
  }
  Vec2 sum{};
  for (const Vec2& x : cluster) {
    sum += x;
  }
  const double n = static_cast<double>(cluster.size());
  const Vec2 mean{sum.x / n, sum.y / n};
  double cost = 0.0;
  for (const Vec2& x : cluster) {
    cost += norm_sq(x - mean);
  }
  return cost;
}

}  // namespace

double cluster_cost(std::span<const Vec2> c0, std::span<const Vec2> c1) {
  return one_cluster_cost(c0) + one_cluster_cost(c1);
}

namespace detail {

namespace {

// Cost of one candidate over the subset. Arithmetic mirrors cluster_cost on
// the induced partition: per-cluster sums in subset order, then per-cluster
// deviation sums, then one final add.
double candidate_cost(std::span<const TrainSample> samples, std::span<const std::uint32_t> subset,
                      const BinaryTestParams& cand, std::vector<std::uint8_t>& bits) {
  const NormLocation l1 = cand.first();
  const NormLocation l2 = cand.second();
  Vec2 sum0{};
  Vec2 sum1{};
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const TrainSample& s = samples[subset[i]];
    const int bit = binary_test(*s.image, s.region, l1, l2);
    bits[i] = static_cast<std::uint8_t>(bit);
    if (bit == 0) {
      sum0 += s.target;
      ++n0;
    } else {
      sum1 += s.target;
      ++n1;
    }
  }
  const Vec2 mean0 = n0 > 0 ? Vec2{sum0.x / static_cast<double>(n0), sum0.y / static_cast<double>(n0)}
                            : Vec2{};
  const Vec2 mean1 = n1 > 0 ? Vec2{sum1.x / static_cast<double>(n1), sum1.y / static_cast<double>(n1)}
                            : Vec2{};
  double cost0 = 0.0;
  double cost1 = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const TrainSample& s = samples[subset[i]];
    if (bits[i] == 0) {
      cost0 += norm_sq(s.target - mean0);
    } else {
      cost1 += norm_sq(s.target - mean1);
    }
  }
  return cost0 + cost1;
}

// Below this many test evaluations the thread spawn costs more than it saves.
constexpr std::size_t kParallelWorkThreshold = 16384;

}  // namespace

SplitSelection select_test_indexed(std::span<const TrainSample> samples,
                                   std::span<const std::uint32_t> subset,
                                   std::span<const BinaryTestParams> candidates, int n_threads) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_test: candidate list is empty");
  }

  std::vector<double> costs(candidates.size());
  const std::size_t work = subset.size() * candidates.size();
  if (n_threads > 1 && work >= kParallelWorkThreshold) {
    parallel_for(candidates.size(), n_threads, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint8_t> bits(subset.size());
      for (std::size_t c = begin; c < end; ++c) {
        costs[c] = candidate_cost(samples, subset, candidates[c], bits);
      }
    });
  } else {
    std::vector<std::uint8_t> bits(subset.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      costs[c] = candidate_cost(samples, subset, candidates[c], bits);
    }
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < costs.size(); ++c) {
    if (costs[c] < costs[best]) {
      best = c;
    }
  }

  SplitSelection sel;
  sel.best_index = best;
  sel.best_cost = costs[best];
  const NormLocation l1 = candidates[best].first();
  const NormLocation l2 = candidates[best].second();
  for (const std::uint32_t idx : subset) {
    const TrainSample& s = samples[idx];
    if (binary_test(*s.image, s.region, l1, l2) == 0) {
      sel.left.push_back(idx);
    } else {
      sel.right.push_back(idx);
    }
  }
  return sel;
}

}  // namespace detail

SplitSelection select_test(std::span<const TrainSample> samples,
                           std::span<const BinaryTestParams> candidates, int n_threads) {
  std::vector<std::uint32_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0u);
  return detail::select_test_indexed(samples, all, candidates, n_threads);
}

std::vector<BinaryTestParams> draw_candidate_tests(Rng& rng, int n_candidates) {
  std::vector<BinaryTestParams> cands(static_cast<std::size_t>(n_candidates));
  for (BinaryTestParams& c : cands) {
    c.u1 = quantize_unit(rng.uniform(-1.0, 1.0));
    c.v1 = quantize_unit(rng.uniform(-1.0, 1.0));
    c.u2 = quantize_unit(rng.uniform(-1.0, 1.0));
    c.v2 = quantize_unit(rng.uniform(-1.0, 1.0));
  }
  return cands;
}

namespace {

Vec2 mean_target(std::span<const TrainSample> samples, std::span<const std::uint32_t> subset) {
  Vec2 sum{};
  for (const std::uint32_t idx : subset) {
    sum += samples[idx].target;
  }
  const double n = static_cast<double>(subset.size());
  return {sum.x / n, sum.y / n};
}

struct TreeGrower {
  std::span<const TrainSample> samples;
  int depth;
  int n_candidates;
  Rng& rng;
  int n_threads;
  RegressionTree tree;

  // Pre-order so the generator is consumed identically for every data set:
  // every internal node draws n_candidates tests, empty ones included.
  void grow(std::size_t node, int level, std::vector<std::uint32_t> subset, Vec2 inherited) {
    const Vec2 mean = subset.empty() ? inherited : mean_target(samples, subset);
    if (level == depth) {
      const std::size_t n_internal = (std::size_t{1} << depth) - 1;
      tree.leaves[node - n_internal] = Vec2f{static_cast<float>(mean.x),
                                             static_cast<float>(mean.y)};
      return;
    }
    const std::vector<BinaryTestParams> cands = draw_candidate_tests(rng, n_candidates);
    SplitSelection sel = detail::select_test_indexed(samples, subset, cands, n_threads);
    tree.tests[node] = cands[sel.best_index];
    grow(2 * node + 1, level + 1, std::move(sel.left), mean);
    grow(2 * node + 2, level + 1, std::move(sel.right), mean);
  }
};

}  // namespace

RegressionTree grow_tree(std::span<const TrainSample> samples, int depth, int n_candidates,
                         Rng& rng, int n_threads) {
  if (samples.empty()) {
    throw std::invalid_argument("grow_tree: sample list is empty");
  }
  if (depth < 1) {
    throw std::invalid_argument("grow_tree: depth must be at least 1");
  }
  if (n_candidates < 1) {
    throw std::invalid_argument("grow_tree: need at least one candidate test per node");
  }

  TreeGrower grower{samples, depth, n_candidates, rng, n_threads, RegressionTree{}};
  grower.tree.depth = depth;
  grower.tree.tests.resize((std::size_t{1} << depth) - 1);
  grower.tree.leaves.resize(std::size_t{1} << depth);

  std::vector<std::uint32_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0u);
  grower.grow(0, 0, std::move(all), Vec2{});
  return grower.tree;
}

}  // namespace lmk
