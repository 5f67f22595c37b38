#include "fxcov/stats.hpp"

#include <cmath>
#include <string>

#include "fxcov/errors.hpp"

namespace fxcov {

namespace {

void check_projection(const SpectrumEstimate& sp, int p) {
  const int k = static_cast<int>(sp.eigenvalues.size());
  if (p < 1 || p > k)
    throw std::invalid_argument("projection order " + std::to_string(p) +
                                " must lie in 1.." + std::to_string(k));
  for (int i = 0; i < p; ++i) {
    if (sp.eigenvalues[i] < kMinEigenvalue)
      throw DegenerateSpectrumError(
          "spectrum eigenvalue " + std::to_string(i + 1) + " is " +
          std::to_string(sp.eigenvalues[i]) +
          ", too small for a projection of order " + std::to_string(p));
  }
}

// Scores of the centered curves against the retained basis columns.
Eigen::MatrixXd scores(const FunctionalSeries& s, const FpcBasis& basis) {
  const Eigen::MatrixXd centered =
      s.values().rowwise() - s.values().colwise().mean();
  return centered * basis.eigenfunctions.leftCols(basis.q) * s.grid().weight();
}

CusumResult reduce_trajectory(std::vector<double> traj) {
  const int t = static_cast<int>(traj.size()) - 1;
  double best = traj[1];
  int at = 1;
  for (int k = 2; k < t; ++k) {
    if (traj[k] > best) {
      best = traj[k];
      at = k;
    }
  }
  return CusumResult{best, at, std::move(traj)};
}

}

double stat_F(const BivariateSeries& b, const Surface& c0) {
  const double d = cross_cov_distance(b, c0);
  return b.length() * d * d;
}

double stat_Fp(const BivariateSeries& b, const SpectrumEstimate& sp, int p,
               const Surface& c0) {
  check_projection(sp, p);
  if (c0.grid() != b.grid())
    throw ConformabilityError("surface grid does not match the series grid");
  const Surface chat = partial_cross_cov(b, 1.0).surface;
  const Surface diff(b.grid(), chat.values() - c0.values());
  double f = 0.0;
  for (int i = 0; i < p; ++i) {
    const double proj = inner_product_2d(diff, reconstruct_eigenfunction(sp, i));
    f += b.length() * proj * proj / sp.eigenvalues[i];
  }
  return f;
}

CusumResult stat_Z(const BivariateSeries& b) {
  const CrossCovScan scan(b);
  const int t = scan.length();
  std::vector<double> traj(t + 1);
  for (int k = 0; k <= t; ++k) traj[k] = t * scan.cusum_sq()[k];
  return reduce_trajectory(std::move(traj));
}

CusumResult stat_Zp(const BivariateSeries& b, const SpectrumEstimate& sp,
                    int p) {
  check_projection(sp, p);
  if (sp.basis_x.grid != b.grid())
    throw ConformabilityError("spectrum grid does not match the series grid");
  const int t = b.length();
  if (t < 2)
    throw std::invalid_argument("need at least two pairs for a CUSUM scan");

  const Eigen::MatrixXd a = scores(b.x(), sp.basis_x);
  const Eigen::MatrixXd c = scores(b.y(), sp.basis_y);

  // d(m, i) = a_m' Phi_i c_m: the score of the m-th centered product against
  // eigen-array i. Any constant shift of d cancels inside the CUSUM, so the
  // product-mean correction is not needed here.
  Eigen::MatrixXd d(t, p);
  for (int i = 0; i < p; ++i)
    d.col(i) = ((a * sp.eigen_arrays[i]).cwiseProduct(c)).rowwise().sum();

  // Prefix sums; the k = T row reuses the accumulated total so the endpoint
  // cancels exactly.
  std::vector<double> traj(t + 1, 0.0);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(p);
  for (int m = 0; m < t; ++m) total += d.row(m).transpose();

  Eigen::VectorXd prefix = Eigen::VectorXd::Zero(p);
  for (int k = 1; k <= t; ++k) {
    prefix += d.row(k - 1).transpose();
    const double frac = static_cast<double>(k) / t;
    double sum = 0.0;
    for (int i = 0; i < p; ++i) {
      const double dev = (prefix[i] - frac * total[i]) / t;
      sum += dev * dev / sp.eigenvalues[i];
    }
    traj[k] = t * sum;
  }
  return reduce_trajectory(std::move(traj));
}

}
