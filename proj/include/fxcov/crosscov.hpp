#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fxcov/fdata.hpp"

namespace fxcov {

struct PartialCrossCov {
  Surface surface;
  double fraction;     // the x that was requested
  int sample_length;   // floor(T * x) terms entered the sum
};

// Partial-sample cross-covariance estimator: (1/T) times the sum of the first
// floor(T*x) centered outer products. Centering always uses the full-sample
// means, which is what makes the CUSUM functional below pivot correctly.
PartialCrossCov partial_cross_cov(const BivariateSeries& b, double x);

// L2 distance between the full-sample estimate and a hypothesized surface.
double cross_cov_distance(const BivariateSeries& b, const Surface& c0);

// Running-prefix evaluation of the CUSUM functional
//   cusum(k) = || Chat(.,.,k/T) - (k/T) Chat(.,.,1) ||_2^2,  k = 0..T.
// One pass accumulates the full-sample sum; the second replays the same
// additions, so the k = T entry cancels to exactly zero in floating point.
class CrossCovScan {
public:
  explicit CrossCovScan(const BivariateSeries& b);

  // Squared L2 norms, length T+1.
  const std::vector<double>& cusum_sq() const { return cusum_sq_; }
  int length() const { return static_cast<int>(cusum_sq_.size()) - 1; }

private:
  std::vector<double> cusum_sq_;
};

}
