#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lmk/cascade.hpp"

namespace lmk {

struct LabeledPoint {
  std::string label;
  Vec2 position;  // pixels
};

/// One face's estimates paired with ground truth and the inter-ocular
/// distance used as the error denominator. Construction validates that
/// every estimate label has ground truth and that inter_ocular is positive.
class EvalRecord {
 public:
  EvalRecord(std::vector<LabeledPoint> estimates, std::vector<LabeledPoint> ground_truth,
             double inter_ocular);

  const std::vector<LabeledPoint>& estimates() const noexcept { return estimates_; }
  const std::vector<LabeledPoint>& ground_truth() const noexcept { return ground_truth_; }
  double inter_ocular() const noexcept { return inter_ocular_; }

 private:
  std::vector<LabeledPoint> estimates_;
  std::vector<LabeledPoint> ground_truth_;
  double inter_ocular_ = 0.0;
};

/// Mean over estimated landmarks of the distance to ground truth, divided by
/// the inter-ocular distance. 0.25 is roughly eye center to corner, 0.1 the
/// iris, 0.05 the pupil.
double normalized_error(const EvalRecord& rec);

struct AccuracyCurve {
  std::vector<double> thresholds;
  std::vector<double> fractions;
};

/// Fraction of errors strictly below each threshold. Thresholds must be
/// ascending; errors must be non-empty.
AccuracyCurve accuracy_curve(std::span<const double> errors, std::span<const double> thresholds);

/// CSV with a "threshold,fraction" header row.
void write_curve_csv(std::ostream& out, const AccuracyCurve& curve);

struct BenchmarkStats {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  int repetitions = 0;
};

/// Wall-clock statistics of estimate() on a preloaded image, single thread,
/// monotonic clock, min(10, repetitions) unrecorded warm-up runs first.
/// Percentiles use the nearest-rank rule.
BenchmarkStats benchmark(const CascadeModel& model, const GrayImage& img, const Region& region,
                         const PerturbationPolicy& policy, int repetitions);

}  // namespace lmk
