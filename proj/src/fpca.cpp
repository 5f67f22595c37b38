#include "fxcov/fpca.hpp"

#include <cmath>
#include <string>

#include "fxcov/errors.hpp"

namespace fxcov {

namespace {

// Deterministic sign: make the first coordinate of largest magnitude
// positive. Keeps eigenfunctions stable across runs and platforms up to
// the eigensolver itself.
void fix_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::Index at = 0;
    columns.col(c).cwiseAbs().maxCoeff(&at);
    if (columns(at, c) < 0.0) columns.col(c) = -columns.col(c);
  }
}

FpcBasis decompose(const FunctionalSeries& s) {
  const int r = s.grid().size();
  const Eigen::MatrixXd cov = sample_cov_matrix(s);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of the covariance failed");

  // The solver returns ascending order; flip to descending and clip the
  // tiny negative values rounding can produce.
  Eigen::VectorXd vals = es.eigenvalues().reverse();
  Eigen::MatrixXd vecs = es.eigenvectors().rowwise().reverse();
  vals = vals.cwiseMax(0.0);

  // Matrix eigenvalues -> functional eigenvalues, unit vectors -> curves
  // orthonormal under the 1/R quadrature.
  vals /= r;
  vecs *= std::sqrt(static_cast<double>(r));
  fix_signs(vecs);

  FpcBasis basis{s.grid(), std::move(vals), std::move(vecs), 0, 0.0, false};
  if (basis.eigenvalues.sum() <= 0.0)
    throw DegenerateSpectrumError(
        "series has no variance, cannot build a principal component basis");
  return basis;
}

void retain(FpcBasis& basis, int q) {
  basis.q = q;
  basis.variance_explained =
      basis.eigenvalues.head(q).sum() / basis.eigenvalues.sum();
  for (int i = 1; i < q; ++i)
    if (basis.eigenvalues[i - 1] - basis.eigenvalues[i] < 1e-8)
      basis.gap_warning = true;
}

}

Eigen::MatrixXd sample_cov_matrix(const FunctionalSeries& s) {
  if (s.length() < 2)
    throw std::invalid_argument(
        "need at least two curves to estimate a covariance");
  const Eigen::MatrixXd centered =
      s.values().rowwise() - s.values().colwise().mean();
  return (centered.transpose() * centered) / s.length();
}

FpcBasis fpc_basis(const FunctionalSeries& s, double v, int max_q) {
  if (!(v > 0.0 && v <= 1.0))
    throw std::invalid_argument("variance threshold must lie in (0, 1]");
  if (max_q < 1) throw std::invalid_argument("component cap must be positive");

  FpcBasis basis = decompose(s);
  const double total = basis.eigenvalues.sum();
  const int r = s.grid().size();
  int q = std::min(max_q, r);
  double cum = 0.0;
  for (int i = 0; i < std::min(max_q, r); ++i) {
    cum += basis.eigenvalues[i];
    if (cum >= v * total) {
      q = i + 1;
      break;
    }
  }
  retain(basis, q);
  return basis;
}

FpcBasis fpc_basis_fixed(const FunctionalSeries& s, int q) {
  const int r = s.grid().size();
  if (q < 1 || q > r)
    throw std::invalid_argument("component count " + std::to_string(q) +
                                " must lie in 1.." + std::to_string(r));
  FpcBasis basis = decompose(s);
  retain(basis, q);
  return basis;
}

}
