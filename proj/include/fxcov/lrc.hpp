#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fxcov/fdata.hpp"
#include "fxcov/fpca.hpp"

namespace fxcov {

// Bartlett kernel (1 - |u|) on |u| < 1.
double bartlett_weight(double u);

// Smallest integer h with h^5 >= T, i.e. ceil(T^(1/5)) computed without
// floating point so boundary values like T = 243 round the right way.
int default_bandwidth(int t);

// Per-curve principal component scores and the centered product array
//   b_m[i][j] = a_m[i] c_m[j] - (1/T) sum_m' a_m'[i] c_m'[j],
// where a and c are the scores of the centered X and Y curves. The products
// are stored flattened, row m = vec(b_m) with flat index i * qy + j. All
// long-run covariance work happens on these T x (qx*qy) rows; nothing below
// ever forms an R^4 object.
struct CoeffSeries {
  int qx;
  int qy;
  Eigen::MatrixXd scores_x;  // T x qx
  Eigen::MatrixXd scores_y;  // T x qy
  Eigen::MatrixXd products;  // T x (qx*qy), mean-centered per column
};

CoeffSeries coeff_series(const BivariateSeries& b, const FpcBasis& bx,
                         const FpcBasis& by);

// Lag weight: any symmetric continuous function with support in (-1, 1).
using LagWeight = double (*)(double);

// The long-run covariance of the product array, tiled as a (qx*qy) square
// matrix. Symmetrized exactly by averaging with its transpose, so the
// eigensolver sees a bona fide self-adjoint operator.
struct LrcTensor {
  int qx;
  int qy;
  Eigen::MatrixXd tiled;  // (qx*qy) x (qx*qy)

  // Tensor entry in index form, flat index (i, j) -> i * qy + j.
  double entry(int i, int j, int k, int r) const {
    return tiled(i * qy + j, k * qy + r);
  }
};

LrcTensor lrc_tensor(const CoeffSeries& cs, int h,
                     LagWeight weight = bartlett_weight);

// Eigenpairs of the tiled operator. Eigen-arrays act on the product basis;
// reconstruct_eigenfunction maps one back to a surface on the grid.
struct SpectrumEstimate {
  Eigen::VectorXd eigenvalues;              // descending, negatives clipped
  std::vector<Eigen::MatrixXd> eigen_arrays;  // qx x qy each
  FpcBasis basis_x;
  FpcBasis basis_y;
  int h = 0;            // bandwidth that produced the tensor
  int n_clipped = 0;    // eigenvalues clipped to zero
  double clipped_mass = 0.0;  // total mass removed by clipping
};

SpectrumEstimate spectrum(const LrcTensor& m, const FpcBasis& bx,
                          const FpcBasis& by);

Surface reconstruct_eigenfunction(const SpectrumEstimate& sp, int i);

// Convenience pipeline: scores, tensor, eigenpairs in one call.
SpectrumEstimate estimate_spectrum(const BivariateSeries& b,
                                   const FpcBasis& bx, const FpcBasis& by,
                                   int h);

}
