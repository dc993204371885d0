#include "lmk/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace lmk {

EvalRecord::EvalRecord(std::vector<LabeledPoint> estimates, std::vector<LabeledPoint> ground_truth,
                       double inter_ocular)
    : estimates_(std::move(estimates)),
      ground_truth_(std::move(ground_truth)),
      inter_ocular_(inter_ocular) {
  if (!(inter_ocular_ > 0.0)) {
    throw std::invalid_argument("EvalRecord: inter_ocular must be positive");
  }
  for (const LabeledPoint& est : estimates_) {
    const bool known = std::any_of(ground_truth_.begin(), ground_truth_.end(),
                                   [&](const LabeledPoint& gt) { return gt.label == est.label; });
    if (!known) {
      throw std::invalid_argument("EvalRecord: estimate label \"" + est.label +
                                  "\" has no ground truth");
    }
  }
}

double normalized_error(const EvalRecord& rec) {
  if (rec.estimates().empty()) {
    throw std::invalid_argument("normalized_error: no estimates");
  }
  double sum = 0.0;
  for (const LabeledPoint& est : rec.estimates()) {
    for (const LabeledPoint& gt : rec.ground_truth()) {
      if (gt.label == est.label) {
        sum += distance(est.position, gt.position) / rec.inter_ocular();
        break;
      }
    }
  }
  return sum / static_cast<double>(rec.estimates().size());
}

AccuracyCurve accuracy_curve(std::span<const double> errors, std::span<const double> thresholds) {
  if (errors.empty()) {
    throw std::invalid_argument("accuracy_curve: error list is empty");
  }
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i - 1] < thresholds[i])) {
      throw std::invalid_argument("accuracy_curve: thresholds must be strictly ascending");
    }
  }
  AccuracyCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  curve.fractions.reserve(thresholds.size());
  const double n = static_cast<double>(errors.size());
  for (const double t : thresholds) {
    std::size_t below = 0;
    for (const double e : errors) {
      if (e < t) {  // strict, "smaller than"
        ++below;
      }
    }
    curve.fractions.push_back(static_cast<double>(below) / n);
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const AccuracyCurve& curve) {
  out << "threshold,fraction\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    out << curve.thresholds[i] << ',' << curve.fractions[i] << '\n';
  }
}

namespace {

double nearest_rank(const std::vector<double>& sorted, double quantile) {
  const std::size_t n = sorted.size();
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n)));
  return sorted[std::min(rank > 0 ? rank - 1 : 0, n - 1)];
}

}  // namespace

BenchmarkStats benchmark(const CascadeModel& model, const GrayImage& img, const Region& region,
                         const PerturbationPolicy& policy, int repetitions) {
  if (repetitions < 1) {
    throw std::invalid_argument("benchmark: repetitions must be at least 1");
  }
  using clock = std::chrono::steady_clock;

  const int warmup = std::min(10, repetitions);
  volatile double sink = 0.0;
  for (int i = 0; i < warmup; ++i) {
    sink = sink + estimate(model, img, region, policy).x;
  }

  std::vector<double> times_ms(static_cast<std::size_t>(repetitions));
  for (int i = 0; i < repetitions; ++i) {
    const auto t0 = clock::now();
    const Vec2 p = estimate(model, img, region, policy);
    const auto t1 = clock::now();
    sink = sink + p.x;
    times_ms[static_cast<std::size_t>(i)] =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
  }

  BenchmarkStats stats;
  stats.repetitions = repetitions;
  double total = 0.0;
  for (const double t : times_ms) {
    total += t;
  }
  stats.mean_ms = total / static_cast<double>(repetitions);
  std::sort(times_ms.begin(), times_ms.end());
  stats.p50_ms = nearest_rank(times_ms, 0.50);
  stats.p95_ms = nearest_rank(times_ms, 0.95);
  return stats;
}

}  // namespace lmk
