#include "fxcov/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fxcov {

namespace {

void check_lambdas(const Eigen::VectorXd& lambdas) {
  if (lambdas.size() == 0)
    throw std::invalid_argument("need at least one weight");
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    if (!(lambdas[i] >= 0.0) || !std::isfinite(lambdas[i]))
      throw std::invalid_argument("weights must be finite and nonnegative");
}

void check_reps(int n_reps) {
  if (n_reps < 1)
    throw std::invalid_argument("replication count must be positive");
}

// Regularized incomplete gamma P(a, x) by series expansion, valid x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized incomplete gamma Q(a, x) by continued fraction, valid
// x >= a + 1 (modified Lentz).
double gamma_q_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int n = 1; n < 10000; ++n) {
    const double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}

double NullDistribution::p_value(double stat) const {
  if (!std::isfinite(stat))
    throw std::invalid_argument("statistic must be finite");
  if (kind == NullKind::chisq_p) return chisq_p_pvalue(stat, p);
  const auto it = std::lower_bound(samples.begin(), samples.end(), stat);
  const auto n_ge = static_cast<double>(samples.end() - it);
  return (1.0 + n_ge) / (static_cast<double>(samples.size()) + 1.0);
}

double NullDistribution::quantile(double prob) const {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  if (kind == NullKind::chisq_p) {
    // Invert the closed-form tail by bisection; the tail is monotone.
    double lo = 0.0, hi = 1.0;
    while (chisq_p_pvalue(hi, p) > 1.0 - prob) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (chisq_p_pvalue(mid, p) > 1.0 - prob)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  const auto n = static_cast<long>(samples.size());
  long idx = static_cast<long>(std::ceil(prob * (n + 1))) - 1;
  idx = std::clamp(idx, 0L, n - 1);
  return samples[static_cast<std::size_t>(idx)];
}

std::vector<double> brownian_bridge_path(int grid_size, RngStream& rng) {
  if (grid_size < 2)
    throw std::invalid_argument("bridge grid needs at least two steps");
  std::vector<double> path(grid_size + 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid_size));
  path[0] = 0.0;
  for (int i = 1; i <= grid_size; ++i)
    path[i] = path[i - 1] + scale * rng.normal();
  const double endpoint = path[grid_size];
  for (int i = 1; i <= grid_size; ++i)
    path[i] -= (static_cast<double>(i) / grid_size) * endpoint;
  // path[grid_size] is endpoint - 1.0 * endpoint = exactly zero.
  return path;
}

NullDistribution sim_weighted_chisq(const Eigen::VectorXd& lambdas, int n_reps,
                                    std::uint64_t seed) {
  check_lambdas(lambdas);
  check_reps(n_reps);
  NullDistribution null{NullKind::weighted_chisq, lambdas, 0, {}, n_reps, seed,
                        0};
  null.samples.resize(n_reps);
  for (int r = 0; r < n_reps; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
      const double z = rng.normal();
      s += lambdas[i] * z * z;
    }
    null.samples[r] = s;
  }
  std::sort(null.samples.begin(), null.samples.end());
  return null;
}

double chisq_p_pvalue(double stat, int p) {
  if (p < 1) throw std::invalid_argument("degrees of freedom must be positive");
  if (!std::isfinite(stat))
    throw std::invalid_argument("statistic must be finite");
  if (stat <= 0.0) return 1.0;
  const double a = 0.5 * p;
  const double x = 0.5 * stat;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

NullDistribution chisq_null(int p) {
  if (p < 1) throw std::invalid_argument("degrees of freedom must be positive");
  return NullDistribution{NullKind::chisq_p, Eigen::VectorXd(), p, {}, 0, 0, 0};
}

NullDistribution sim_sup_weighted_bridges(const Eigen::VectorXd& lambdas,
                                          int grid_size, int n_reps,
                                          std::uint64_t seed) {
  check_lambdas(lambdas);
  check_reps(n_reps);
  if (grid_size < 2)
    throw std::invalid_argument("bridge grid needs at least two steps");

  NullDistribution null{NullKind::sup_weighted_bridges, lambdas, 0, {},
                        n_reps, seed, grid_size};
  null.samples.resize(n_reps);
  std::vector<double> acc(grid_size + 1);
  for (int r = 0; r < n_reps; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    std::fill(acc.begin(), acc.end(), 0.0);
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
      const std::vector<double> path = brownian_bridge_path(grid_size, rng);
      for (int j = 0; j <= grid_size; ++j)
        acc[j] += lambdas[i] * path[j] * path[j];
    }
    null.samples[r] = *std::max_element(acc.begin(), acc.end());
  }
  std::sort(null.samples.begin(), null.samples.end());
  return null;
}

NullDistribution sim_kiefer(int p, int grid_size, int n_reps,
                            std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("degrees of freedom must be positive");
  NullDistribution null = sim_sup_weighted_bridges(Eigen::VectorXd::Ones(p),
                                                   grid_size, n_reps, seed);
  null.kind = NullKind::kiefer_p;
  null.p = p;
  null.lambdas = Eigen::VectorXd();
  return null;
}

}
