#include "fxcov/fdata.hpp"

#include <cmath>
#include <string>

namespace fxcov {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite())
    throw std::invalid_argument(std::string(what) +
                                " contains a non-finite value");
}

}

Grid::Grid(int r) : r_(r) {
  if (r < 1) throw std::invalid_argument("grid size must be at least 1");
}

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd p(r_);
  for (int j = 0; j < r_; ++j) p[j] = point(j);
  return p;
}

FunctionalSeries::FunctionalSeries(Grid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() < 1)
    throw std::invalid_argument("functional series needs at least one curve");
  if (values_.cols() != grid_.size())
    throw ConformabilityError(
        "curve has " + std::to_string(values_.cols()) +
        " points but the grid has " + std::to_string(grid_.size()));
  require_finite(values_, "functional series");
}

Surface::Surface(Grid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid_.size() || values_.cols() != grid_.size())
    throw ConformabilityError(
        "surface is " + std::to_string(values_.rows()) + "x" +
        std::to_string(values_.cols()) + " but the grid has " +
        std::to_string(grid_.size()) + " points");
  require_finite(values_, "surface");
}

Surface Surface::zero(const Grid& grid) {
  return Surface(grid, Eigen::MatrixXd::Zero(grid.size(), grid.size()));
}

BivariateSeries::BivariateSeries(FunctionalSeries x, FunctionalSeries y,
                                 int lag)
    : x_(std::move(x)), y_(std::move(y)), lag_(lag) {
  if (x_.grid() != y_.grid())
    throw ConformabilityError("series are sampled on different grids");
  if (x_.length() != y_.length())
    throw ConformabilityError(
        "series have different lengths: " + std::to_string(x_.length()) +
        " vs " + std::to_string(y_.length()));
  if (lag_ < 0) throw std::invalid_argument("lag must be nonnegative");
}

double inner_product_1d(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                        const Grid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw ConformabilityError("inner product arguments must live on the grid");
  return f.dot(g) * grid.weight();
}

double inner_product_2d(const Surface& f, const Surface& g) {
  if (f.grid() != g.grid())
    throw ConformabilityError("surfaces live on different grids");
  const double w = f.grid().weight();
  return f.values().cwiseProduct(g.values()).sum() * w * w;
}

double norm_2d(const Surface& f) {
  return std::sqrt(f.values().squaredNorm()) * f.grid().weight();
}

Eigen::VectorXd mean_curve(const FunctionalSeries& s) {
  return s.values().colwise().mean();
}

FunctionalSeries cidr_transform(const FunctionalSeries& prices) {
  const Eigen::MatrixXd& p = prices.values();
  Eigen::MatrixXd out(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (!(p(i, j) > 0.0))
        throw std::invalid_argument(
            "price must be positive, got " + std::to_string(p(i, j)) +
            " at curve " + std::to_string(i + 1) + ", point " +
            std::to_string(j + 1));
    }
    const double base = std::log(p(i, 0));
    out(i, 0) = 0.0;
    for (Eigen::Index j = 1; j < p.cols(); ++j)
      out(i, j) = 100.0 * (std::log(p(i, j)) - base);
  }
  return FunctionalSeries(prices.grid(), std::move(out));
}

BivariateSeries apply_lag(const FunctionalSeries& x, const FunctionalSeries& y,
                          int lag) {
  if (x.grid() != y.grid())
    throw ConformabilityError("series are sampled on different grids");
  if (x.length() != y.length())
    throw ConformabilityError(
        "series have different lengths: " + std::to_string(x.length()) +
        " vs " + std::to_string(y.length()));
  if (lag < 0) throw std::invalid_argument("lag must be nonnegative");
  const int t = x.length();
  if (lag >= t - 1)
    throw std::invalid_argument("lag " + std::to_string(lag) +
                                " leaves fewer than two pairs out of T = " +
                                std::to_string(t));
  const int n = t - lag;
  FunctionalSeries xl(x.grid(), x.values().bottomRows(n));
  FunctionalSeries yl(y.grid(), y.values().topRows(n));
  return BivariateSeries(std::move(xl), std::move(yl), lag);
}

}
