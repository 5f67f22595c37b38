#include "fxcov/crosscov.hpp"

#include <cmath>
#include <string>

namespace fxcov {

namespace {

void require_estimable(const BivariateSeries& b) {
  if (b.length() < 2)
    throw std::invalid_argument(
        "need at least two pairs to estimate a cross-covariance");
}

// Centered values, full-sample means.
Eigen::MatrixXd centered(const FunctionalSeries& s) {
  return s.values().rowwise() - s.values().colwise().mean();
}

}

PartialCrossCov partial_cross_cov(const BivariateSeries& b, double x) {
  require_estimable(b);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("fraction x must lie in [0, 1], got " +
                                std::to_string(x));
  const int t = b.length();
  const int n = static_cast<int>(std::floor(t * x));

  const Eigen::MatrixXd xc = centered(b.x());
  const Eigen::MatrixXd yc = centered(b.y());
  const int r = b.grid().size();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(r, r);
  if (n > 0) sum.noalias() = xc.topRows(n).transpose() * yc.topRows(n);
  return PartialCrossCov{Surface(b.grid(), sum / t), x, n};
}

double cross_cov_distance(const BivariateSeries& b, const Surface& c0) {
  if (c0.grid() != b.grid())
    throw ConformabilityError("surface grid does not match the series grid");
  const Surface full = partial_cross_cov(b, 1.0).surface;
  return std::sqrt((full.values() - c0.values()).squaredNorm()) *
         b.grid().weight();
}

CrossCovScan::CrossCovScan(const BivariateSeries& b) {
  require_estimable(b);
  const int t = b.length();
  const int r = b.grid().size();
  const Eigen::MatrixXd xc = centered(b.x());
  const Eigen::MatrixXd yc = centered(b.y());

  // Pass 1: full-sample sum, built by the same chain of rank-one updates the
  // scan below uses, so the final prefix reproduces it bit for bit.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(r, r);
  for (int k = 0; k < t; ++k)
    full.noalias() += xc.row(k).transpose() * yc.row(k);

  // Pass 2: prefix scan.
  cusum_sq_.assign(t + 1, 0.0);
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(r, r);
  const double inv_tr = 1.0 / (static_cast<double>(t) * r);
  for (int k = 1; k <= t; ++k) {
    prefix.noalias() += xc.row(k - 1).transpose() * yc.row(k - 1);
    const double frac = static_cast<double>(k) / t;
    const double nrm2 = (prefix - frac * full).squaredNorm();
    cusum_sq_[k] = nrm2 * inv_tr * inv_tr;
  }
}

}
