#include "fxcov/lrc.hpp"

#include <cmath>
#include <string>

#include "fxcov/errors.hpp"

namespace fxcov {

double bartlett_weight(double u) {
  const double a = std::abs(u);
  return a < 1.0 ? 1.0 - a : 0.0;
}

int default_bandwidth(int t) {
  if (t < 1) throw std::invalid_argument("sample length must be positive");
  int h = 1;
  // h^5 fits comfortably in 64 bits for any sane T.
  while (static_cast<long long>(h) * h * h * h * h < t) ++h;
  return h;
}

CoeffSeries coeff_series(const BivariateSeries& b, const FpcBasis& bx,
                         const FpcBasis& by) {
  if (bx.grid != b.grid() || by.grid != b.grid())
    throw ConformabilityError("basis grid does not match the series grid");
  const int t = b.length();
  if (t < 2)
    throw std::invalid_argument("need at least two pairs to form scores");
  const int qx = bx.q, qy = by.q;
  const double w = b.grid().weight();

  // Scores of the centered curves against the retained eigenfunctions.
  const Eigen::MatrixXd xc =
      b.x().values().rowwise() - b.x().values().colwise().mean();
  const Eigen::MatrixXd yc =
      b.y().values().rowwise() - b.y().values().colwise().mean();
  Eigen::MatrixXd a = xc * bx.eigenfunctions.leftCols(qx) * w;
  Eigen::MatrixXd c = yc * by.eigenfunctions.leftCols(qy) * w;

  // Row m holds vec(a_m c_m^T) with flat index i * qy + j; subtracting the
  // column means centers every product cell over the sample.
  Eigen::MatrixXd prod(t, qx * qy);
  for (int m = 0; m < t; ++m)
    for (int i = 0; i < qx; ++i)
      for (int j = 0; j < qy; ++j) prod(m, i * qy + j) = a(m, i) * c(m, j);
  prod.rowwise() -= prod.colwise().mean().eval();

  return CoeffSeries{qx, qy, std::move(a), std::move(c), std::move(prod)};
}

LrcTensor lrc_tensor(const CoeffSeries& cs, int h, LagWeight weight) {
  const int t = static_cast<int>(cs.products.rows());
  // h < T so every lag entering the sum has at least one term.
  if (h < 1 || h >= t)
    throw std::invalid_argument("bandwidth " + std::to_string(h) +
                                " must lie in 1.." + std::to_string(t - 1));
  const Eigen::MatrixXd& bmat = cs.products;

  // Lag-0 term plus weighted covariances at lags below h. The lag-l block
  // pairs row m with row m+l; its transpose covers the negative lag.
  Eigen::MatrixXd m = (bmat.transpose() * bmat) / t;
  for (int lag = 1; lag < h; ++lag) {
    const double w = weight(static_cast<double>(lag) / h);
    Eigen::MatrixXd gamma =
        (bmat.topRows(t - lag).transpose() * bmat.bottomRows(t - lag)) / t;
    m.noalias() += w * (gamma + gamma.transpose());
  }

  // Exact self-adjointness: average with the transpose. Addition commutes in
  // IEEE arithmetic, so the result is symmetric to the last bit.
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return LrcTensor{cs.qx, cs.qy, std::move(sym)};
}

SpectrumEstimate spectrum(const LrcTensor& m, const FpcBasis& bx,
                          const FpcBasis& by) {
  if (m.qx != bx.q || m.qy != by.q)
    throw ConformabilityError("tensor dimensions do not match the bases");
  const int k = m.qx * m.qy;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.tiled);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of the long-run tensor failed");

  Eigen::VectorXd vals = es.eigenvalues().reverse();
  Eigen::MatrixXd vecs = es.eigenvectors().rowwise().reverse();

  SpectrumEstimate sp{Eigen::VectorXd(), {}, bx, by, 0, 0, 0.0};
  for (int i = 0; i < k; ++i) {
    if (vals[i] < 0.0) {
      ++sp.n_clipped;
      sp.clipped_mass += -vals[i];
      vals[i] = 0.0;
    }
  }
  sp.eigenvalues = std::move(vals);

  sp.eigen_arrays.reserve(k);
  for (int i = 0; i < k; ++i) {
    // Unflatten with the same i * qy + j layout used by the scores.
    Eigen::MatrixXd arr(m.qx, m.qy);
    for (int a = 0; a < m.qx; ++a)
      for (int b = 0; b < m.qy; ++b) arr(a, b) = vecs(a * m.qy + b, i);
    Eigen::Index ra = 0, ca = 0;
    arr.cwiseAbs().maxCoeff(&ra, &ca);
    if (arr(ra, ca) < 0.0) arr = -arr;
    sp.eigen_arrays.push_back(std::move(arr));
  }
  return sp;
}

Surface reconstruct_eigenfunction(const SpectrumEstimate& sp, int i) {
  const int k = static_cast<int>(sp.eigen_arrays.size());
  if (i < 0 || i >= k)
    throw std::invalid_argument("eigenfunction index " + std::to_string(i) +
                                " out of range 0.." + std::to_string(k - 1));
  const Eigen::MatrixXd tx = sp.basis_x.eigenfunctions.leftCols(sp.basis_x.q);
  const Eigen::MatrixXd ty = sp.basis_y.eigenfunctions.leftCols(sp.basis_y.q);
  return Surface(sp.basis_x.grid, tx * sp.eigen_arrays[i] * ty.transpose());
}

SpectrumEstimate estimate_spectrum(const BivariateSeries& b,
                                   const FpcBasis& bx, const FpcBasis& by,
                                   int h) {
  const CoeffSeries cs = coeff_series(b, bx, by);
  const LrcTensor m = lrc_tensor(cs, h);
  SpectrumEstimate sp = spectrum(m, bx, by);
  sp.h = h;
  return sp;
}

}
