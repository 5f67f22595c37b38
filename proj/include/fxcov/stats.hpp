#pragma once

#include <vector>

#include "fxcov/crosscov.hpp"
#include "fxcov/fdata.hpp"
#include "fxcov/lrc.hpp"

namespace fxcov {

// Eigenvalues below this are considered zero for projection statistics; the
// corresponding directions carry no usable signal and dividing by them would
// only amplify noise.
inline constexpr double kMinEigenvalue = 1e-8;

// Norm statistic for a specified cross-covariance surface:
//   F_T = T * || Chat(.,.,1) - C0 ||_2^2.
double stat_F(const BivariateSeries& b, const Surface& c0);

// Projected version: scores of sqrt(T) (Chat - C0) against the first p
// eigenfunctions of the long-run spectrum, each standardized by its
// eigenvalue. Asymptotically chi-square with p degrees of freedom.
double stat_Fp(const BivariateSeries& b, const SpectrumEstimate& sp, int p,
               const Surface& c0);

struct CusumResult {
  double value;
  int k_hat;                       // smallest interior argmax
  std::vector<double> trajectory;  // T * cusum(k), k = 0..T
};

// Change-point statistic: T times the largest CUSUM deviation
//   Z_T = T * max_k || Chat(.,.,k/T) - (k/T) Chat(.,.,1) ||_2^2,
// evaluated over k = 0..T. Both endpoints vanish exactly; the reported
// argmax is restricted to the interior 1..T-1.
CusumResult stat_Z(const BivariateSeries& b);

// Projected CUSUM over the first p spectrum directions. Computed entirely in
// score space, which is exact here because the quadrature factorizes over
// the product basis.
CusumResult stat_Zp(const BivariateSeries& b, const SpectrumEstimate& sp,
                    int p);

}
