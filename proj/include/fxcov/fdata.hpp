#pragma once

#include <Eigen/Dense>

#include "fxcov/errors.hpp"

namespace fxcov {

// Evaluation grid t_j = j/R, j = 1..R, with quadrature weight 1/R. Curves are
// stored as their values on this grid; all inner products below are the
// discrete quadrature versions of the L2 inner products on [0,1].
class Grid {
public:
  explicit Grid(int r);

  int size() const { return r_; }
  double weight() const { return 1.0 / r_; }
  double point(int j) const { return static_cast<double>(j + 1) / r_; }
  Eigen::VectorXd points() const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.r_ == b.r_; }
  friend bool operator!=(const Grid& a, const Grid& b) { return a.r_ != b.r_; }

private:
  int r_;
};

// Sample of T curves on a common grid, one row per curve.
class FunctionalSeries {
public:
  FunctionalSeries(Grid grid, Eigen::MatrixXd values);

  const Grid& grid() const { return grid_; }
  int length() const { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }

private:
  Grid grid_;
  Eigen::MatrixXd values_;  // T x R
};

// A kernel on the unit square sampled at grid x grid.
class Surface {
public:
  Surface(Grid grid, Eigen::MatrixXd values);

  static Surface zero(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }

private:
  Grid grid_;
  Eigen::MatrixXd values_;  // R x R
};

// Lagged pair: row i of x() goes with row i of y(), which is the original
// pair (X_{lag+1+i}, Y_{1+i}). length() is the effective sample size T - lag.
class BivariateSeries {
public:
  BivariateSeries(FunctionalSeries x, FunctionalSeries y, int lag = 0);

  const FunctionalSeries& x() const { return x_; }
  const FunctionalSeries& y() const { return y_; }
  const Grid& grid() const { return x_.grid(); }
  int length() const { return x_.length(); }
  int lag() const { return lag_; }

private:
  FunctionalSeries x_;
  FunctionalSeries y_;
  int lag_;
};

double inner_product_1d(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                        const Grid& grid);
double inner_product_2d(const Surface& f, const Surface& g);
double norm_2d(const Surface& f);

Eigen::VectorXd mean_curve(const FunctionalSeries& s);

// Cumulative intraday return curves from a price panel: 100 * (log price at
// t_j minus log price at t_1), row by row. First column is exactly zero.
FunctionalSeries cidr_transform(const FunctionalSeries& prices);

BivariateSeries apply_lag(const FunctionalSeries& x, const FunctionalSeries& y,
                          int lag);

}
