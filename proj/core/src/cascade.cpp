#include "lmk/cascade.hpp"

#include <algorithm>
#include <stdexcept>

#include "lmk/parallel.hpp"

namespace lmk {

Vec2 estimate_once(const CascadeModel& model, const GrayImage& img, const Region& region) {
  Region r = region;
  Vec2 p_px{r.center_x, r.center_y};
  for (std::size_t s = 0; s < model.stages.size(); ++s) {
    const Vec2 p_norm = predict(model.stages[s], img, r);
    p_px = to_pixel(r, p_norm);
    if (s + 1 < model.stages.size()) {
      r = shrink_recenter(r, p_px, static_cast<double>(model.scale_decay));
    }
  }
  return p_px;
}

Vec2 per_dimension_median(std::span<const Vec2> points) {
  if (points.empty()) {
    throw std::invalid_argument("per_dimension_median: empty input");
  }
  std::vector<double> xs(points.size());
  std::vector<double> ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    xs[i] = points[i].x;
    ys[i] = points[i].y;
  }
  const auto median = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) {
      return v[n / 2];
    }
    return (v[n / 2 - 1] + v[n / 2]) * 0.5;
  };
  return {median(xs), median(ys)};
}

namespace {

void validate(const PerturbationPolicy& policy) {
  if (policy.n_perturbations < 1) {
    throw std::invalid_argument("PerturbationPolicy: n_perturbations must be at least 1");
  }
  if (policy.max_offset < 0.0) {
    throw std::invalid_argument("PerturbationPolicy: max_offset must be non-negative");
  }
  if (!(policy.scale_low > 0.0) || policy.scale_low > policy.scale_high) {
    throw std::invalid_argument("PerturbationPolicy: need 0 < scale_low <= scale_high");
  }
}

}  // namespace

Vec2 estimate(const CascadeModel& model, const GrayImage& img, const Region& region,
              const PerturbationPolicy& policy) {
  validate(policy);
  Rng rng(policy.seed);
  std::vector<Vec2> estimates;
  estimates.reserve(static_cast<std::size_t>(policy.n_perturbations));
  for (int i = 0; i < policy.n_perturbations; ++i) {
    const double dx = rng.uniform(-policy.max_offset, policy.max_offset) * region.size;
    const double dy = rng.uniform(-policy.max_offset, policy.max_offset) * region.size;
    const double scale = rng.uniform(policy.scale_low, policy.scale_high);
    const Region perturbed{region.center_x + dx, region.center_y + dy, region.size * scale};
    estimates.push_back(estimate_once(model, img, perturbed));
  }
  return per_dimension_median(estimates);
}

namespace {

void validate(const CascadeTrainConfig& config) {
  if (config.n_stages < 1) {
    throw std::invalid_argument("train_cascade: n_stages must be at least 1");
  }
  if (config.trees_per_stage < 0) {
    throw std::invalid_argument("train_cascade: trees_per_stage must be non-negative");
  }
  if (config.depth < 1) {
    throw std::invalid_argument("train_cascade: depth must be at least 1");
  }
  if (!(config.shrinkage > 0.0f) || config.shrinkage > 1.0f) {
    throw std::invalid_argument("train_cascade: shrinkage must be in (0, 1]");
  }
  if (!(config.scale_decay > 0.0f) || config.scale_decay > 1.0f) {
    throw std::invalid_argument("train_cascade: scale_decay must be in (0, 1]");
  }
  if (config.n_candidates < 1) {
    throw std::invalid_argument("train_cascade: n_candidates must be at least 1");
  }
}

}  // namespace

CascadeModel train_cascade(std::string landmark, std::vector<TrainSample> samples,
                           const CascadeTrainConfig& config, TrainReport* report) {
  validate(config);
  if (samples.empty()) {
    throw std::invalid_argument("train_cascade: sample list is empty");
  }

  // Landmark pixel positions are fixed; targets get re-expressed per frame.
  std::vector<Vec2> landmark_px(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].region.size > 0.0)) {
      throw std::invalid_argument("train_cascade: sample region size must be positive");
    }
    landmark_px[i] = to_pixel(samples[i].region, samples[i].target);
  }

  CascadeModel model;
  model.landmark = std::move(landmark);
  model.scale_decay = config.scale_decay;
  model.stages.reserve(static_cast<std::size_t>(config.n_stages));
  if (report != nullptr) {
    report->stage_mse.clear();
  }

  Rng rng(config.seed);
  for (int stage = 0; stage < config.n_stages; ++stage) {
    std::vector<double>* mse = nullptr;
    if (report != nullptr) {
      report->stage_mse.emplace_back();
      mse = &report->stage_mse.back();
    }
    BoostedEnsemble ens =
        train_ensemble(samples, config.trees_per_stage, config.depth, config.shrinkage,
                       config.n_candidates, rng, config.n_threads, mse);

    const bool last = stage + 1 == config.n_stages;
    if (!last) {
      // Advance every sample through the freshly trained stage.
      const double decay = static_cast<double>(config.scale_decay);
      parallel_for(samples.size(), config.n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          TrainSample& s = samples[i];
          const Vec2 p_px = to_pixel(s.region, predict(ens, *s.image, s.region));
          s.region = shrink_recenter(s.region, p_px, decay);
          s.target = to_normalized(s.region, landmark_px[i]);
        }
      });
    }
    model.stages.push_back(std::move(ens));
  }
  return model;
}

}  // namespace lmk
