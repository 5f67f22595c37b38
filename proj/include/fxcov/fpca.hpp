#pragma once

#include <Eigen/Dense>

#include "fxcov/fdata.hpp"

namespace fxcov {

// Functional principal components of one series. Eigenvalues are in
// functional units (matrix eigenvalues divided by R) and eigenfunction
// columns are scaled by sqrt(R), so they are orthonormal under the
// quadrature inner product. Signs follow a fixed rule: the first entry of
// largest magnitude is positive.
struct FpcBasis {
  Grid grid;
  Eigen::VectorXd eigenvalues;     // length R, descending, negatives clipped
  Eigen::MatrixXd eigenfunctions;  // R x R, column i is theta_i on the grid
  int q;                           // retained components
  double variance_explained;       // cumulative share at q
  // Consecutive retained eigenvalues closer than 1e-8: the component order
  // is then numerically arbitrary, flagged rather than rejected.
  bool gap_warning = false;
};

// Sample covariance matrix of the curves with 1/T normalization.
Eigen::MatrixXd sample_cov_matrix(const FunctionalSeries& s);

// Retain the smallest q whose cumulative variance share reaches v, capped at
// max_q components.
FpcBasis fpc_basis(const FunctionalSeries& s, double v, int max_q = 10);

// Retain exactly q components.
FpcBasis fpc_basis_fixed(const FunctionalSeries& s, int q);

}
