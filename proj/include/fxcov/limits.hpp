#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fxcov/rng.hpp"

namespace fxcov {

enum class NullKind {
  weighted_chisq,        // sum of lambda_i * N_i^2
  chisq_p,               // chi-square with p degrees of freedom, closed form
  sup_weighted_bridges,  // sup_x sum of lambda_i * B_i(x)^2
  kiefer_p,              // sup_x sum over i <= p of B_i(x)^2
};

// A simulated (or closed-form) null law. Monte Carlo kinds keep their sorted
// sample; p-values use the add-one convention (1 + #{draws >= stat}) /
// (n + 1), so they are never exactly zero.
struct NullDistribution {
  NullKind kind;
  Eigen::VectorXd lambdas;      // weighted kinds only
  int p = 0;                    // chisq_p and kiefer_p only
  std::vector<double> samples;  // ascending; empty for chisq_p
  int n_reps = 0;
  std::uint64_t seed = 0;
  int bridge_grid = 0;  // bridge-based kinds only

  double p_value(double stat) const;
  // Upper quantile: order statistic ceil(prob * (n + 1)) for Monte Carlo
  // kinds, numeric inversion for the closed form.
  double quantile(double prob) const;
};

// Standard Brownian bridge sampled at i/grid_size, i = 0..grid_size; both
// endpoints are exactly zero.
std::vector<double> brownian_bridge_path(int grid_size, RngStream& rng);

// Monte Carlo sample of sum_i lambda_i N_i^2. Each replication r draws from
// its own stream (seed, r), so the sample does not depend on scheduling.
NullDistribution sim_weighted_chisq(const Eigen::VectorXd& lambdas, int n_reps,
                                    std::uint64_t seed);

// Exact chi-square upper tail probability, abs error around 1e-12.
double chisq_p_pvalue(double stat, int p);

// Closed-form chi-square null of order p.
NullDistribution chisq_null(int p);

// Monte Carlo sample of sup_x sum_i lambda_i B_i(x)^2 on a discrete grid.
NullDistribution sim_sup_weighted_bridges(const Eigen::VectorXd& lambdas,
                                          int grid_size, int n_reps,
                                          std::uint64_t seed);

// Monte Carlo sample of the Kiefer-type law sup_x sum_{i<=p} B_i(x)^2.
NullDistribution sim_kiefer(int p, int grid_size, int n_reps,
                            std::uint64_t seed);

inline constexpr int kDefaultNullReps = 10000;
inline constexpr int kDefaultBridgeGrid = 1000;

}
