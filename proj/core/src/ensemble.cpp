#include "lmk/ensemble.hpp"

#include <stdexcept>

#include "lmk/parallel.hpp"

namespace lmk {

Vec2 predict(const BoostedEnsemble& ens, const GrayImage& img, const Region& region) {
  Vec2 acc = ens.base.to_vec2();
  const double s = static_cast<double>(ens.shrinkage);
  for (const RegressionTree& tree : ens.trees) {
    acc += s * traverse(tree, img, region);
  }
  return acc;
}

BoostedEnsemble train_ensemble(std::span<const TrainSample> samples, int n_trees, int depth,
                               float shrinkage, int n_candidates, Rng& rng, int n_threads,
                               std::vector<double>* round_mse) {
  if (samples.empty()) {
    throw std::invalid_argument("train_ensemble: sample list is empty");
  }
  if (n_trees < 0) {
    throw std::invalid_argument("train_ensemble: n_trees must be non-negative");
  }
  if (!(shrinkage > 0.0f) || shrinkage > 1.0f) {
    throw std::invalid_argument("train_ensemble: shrinkage must be in (0, 1]");
  }

  BoostedEnsemble ens;
  ens.shrinkage = shrinkage;
  ens.trees.reserve(static_cast<std::size_t>(n_trees));

  Vec2 sum{};
  for (const TrainSample& s : samples) {
    sum += s.target;
  }
  const double n = static_cast<double>(samples.size());
  ens.base = Vec2f{static_cast<float>(sum.x / n), static_cast<float>(sum.y / n)};
  const Vec2 base = ens.base.to_vec2();

  // Working copy whose targets are the residuals of the partial ensemble.
  std::vector<TrainSample> residuals(samples.begin(), samples.end());
  for (TrainSample& s : residuals) {
    s.target -= base;
  }

  const auto record_mse = [&] {
    if (round_mse == nullptr) {
      return;
    }
    double sse = 0.0;
    for (const TrainSample& s : residuals) {
      sse += norm_sq(s.target);
    }
    round_mse->push_back(sse / n);
  };
  if (round_mse != nullptr) {
    round_mse->clear();
  }
  record_mse();

  const double s_factor = static_cast<double>(shrinkage);
  for (int round = 0; round < n_trees; ++round) {
    RegressionTree tree = grow_tree(residuals, depth, n_candidates, rng, n_threads);
    parallel_for(residuals.size(), n_threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        TrainSample& s = residuals[i];
        s.target -= s_factor * traverse(tree, *s.image, s.region);
      }
    });
    ens.trees.push_back(std::move(tree));
    record_mse();
  }
  return ens;
}

}  // namespace lmk
