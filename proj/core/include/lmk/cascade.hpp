#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lmk/ensemble.hpp"

namespace lmk {

/// Coarse-to-fine chain: one boosted ensemble per scale, the region shrinking
/// by scale_decay and recentering on the running estimate between stages.
struct CascadeModel {
  std::string landmark;
  float scale_decay = 1.0f;
  std::vector<BoostedEnsemble> stages;

  friend bool operator==(const CascadeModel&, const CascadeModel&) = default;
};

/// Runtime jitter applied around the query region; the final answer is the
/// per-dimension median over the perturbed estimates. max_offset is a
/// fraction of region size. With max_offset = 0 and scale range (1,1) the
/// result equals estimate_once exactly.
struct PerturbationPolicy {
  int n_perturbations = 7;
  double max_offset = 0.05;
  double scale_low = 0.9;
  double scale_high = 1.1;
  std::uint64_t seed = 0;
};

/// Runs the stage chain once and returns the landmark estimate in image
/// pixel coordinates (real-valued, not rounded).
Vec2 estimate_once(const CascadeModel& model, const GrayImage& img, const Region& region);

/// Median-of-perturbations estimate. Per perturbation the draws are
/// dx, dy (uniform on [-max_offset, +max_offset], scaled by region size)
/// then the scale factor (uniform on [scale_low, scale_high)).
Vec2 estimate(const CascadeModel& model, const GrayImage& img, const Region& region,
              const PerturbationPolicy& policy);

/// Component-wise median; even counts average the two middle values.
/// Invariant under permutation of the input.
Vec2 per_dimension_median(std::span<const Vec2> points);

struct CascadeTrainConfig {
  int n_stages = 6;
  int trees_per_stage = 20;
  int depth = 9;
  float shrinkage = 0.5f;
  float scale_decay = 0.7f;
  int n_candidates = 128;
  std::uint64_t seed = 0;
  int n_threads = 1;
};

/// Per-stage boosting curves: stage_mse[s] holds the mean squared residual
/// after the stage base and after each of its trees.
struct TrainReport {
  std::vector<std::vector<double>> stage_mse;
};

/// Trains the full chain. Stage 1 learns on the given samples; before each
/// later stage every sample's region is re-derived by running the cascade
/// built so far (shrink_recenter at the predicted position) and its target
/// is re-expressed in the new frame, so each stage learns to correct its
/// predecessors' actual errors.
CascadeModel train_cascade(std::string landmark, std::vector<TrainSample> samples,
                           const CascadeTrainConfig& config, TrainReport* report = nullptr);

}  // namespace lmk
