#pragma once

#include <span>
#include <vector>

#include "lmk/tree.hpp"

namespace lmk {

/// Gradient-boosted tree sequence for one cascade stage. Every tree's output
/// is scaled by `shrinkage` (in (0,1]); `base` is the mean training target.
struct BoostedEnsemble {
  Vec2f base{};
  float shrinkage = 1.0f;
  std::vector<RegressionTree> trees;

  friend bool operator==(const BoostedEnsemble&, const BoostedEnsemble&) = default;
};

/// base + shrinkage * sum of tree outputs, accumulated in tree order with
/// one shrinkage multiply per tree so that prefixes of the tree list
/// reproduce the boosting partial sums bit for bit.
Vec2 predict(const BoostedEnsemble& ens, const GrayImage& img, const Region& region);

/// Least-squares boosting: base is the target mean, each tree fits the
/// current residuals, residuals then shrink by shrinkage * tree output.
/// If round_mse is given it receives n_trees+1 entries: the mean squared
/// residual after the base and after each tree.
BoostedEnsemble train_ensemble(std::span<const TrainSample> samples, int n_trees, int depth,
                               float shrinkage, int n_candidates, Rng& rng, int n_threads = 1,
                               std::vector<double>* round_mse = nullptr);

}  // namespace lmk
