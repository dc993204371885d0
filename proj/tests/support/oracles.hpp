#pragma once

// Brute-force references for the split criterion. Deliberately independent of
// the library's selection path: clusters are materialized and the cost is
// evaluated directly from its definition (per-cluster mean, then summed
// squared deviations, in input order).

#include <cstddef>
#include <span>
#include <vector>

#include "lmk/tree.hpp"

namespace lmk::testsupport {

inline double naive_one_cluster_cost(const std::vector<Vec2>& cluster) {
  if (cluster.empty()) {
    return 0.0;
  }
  double sx = 0.0;
  double sy = 0.0;
  for (const Vec2& v : cluster) {
    sx += v.x;
    sy += v.y;
  }
  const double n = static_cast<double>(cluster.size());
  const double mx = sx / n;
  const double my = sy / n;
  double cost = 0.0;
  for (const Vec2& v : cluster) {
    const double dx = v.x - mx;
    const double dy = v.y - my;
    cost += dx * dx + dy * dy;
  }
  return cost;
}

struct NaiveSplit {
  std::size_t best_index = 0;
  double best_cost = 0.0;
  std::vector<Vec2> left_targets;
  std::vector<Vec2> right_targets;
};

inline NaiveSplit naive_best_split(std::span<const TrainSample> samples,
                                   std::span<const BinaryTestParams> candidates) {
  NaiveSplit result;
  bool have_best = false;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::vector<Vec2> c0;
    std::vector<Vec2> c1;
    for (const TrainSample& s : samples) {
      if (binary_test(*s.image, s.region, candidates[c].first(), candidates[c].second()) == 0) {
        c0.push_back(s.target);
      } else {
        c1.push_back(s.target);
      }
    }
    const double cost = naive_one_cluster_cost(c0) + naive_one_cluster_cost(c1);
    if (!have_best || cost < result.best_cost) {
      have_best = true;
      result.best_index = c;
      result.best_cost = cost;
      result.left_targets = std::move(c0);
      result.right_targets = std::move(c1);
    }
  }
  return result;
}

}  // namespace lmk::testsupport
