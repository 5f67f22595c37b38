#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fxcov/fdata.hpp"
#include "fxcov/limits.hpp"
#include "fxcov/rng.hpp"

namespace fxcov {

enum class DgpKind { iid, far1 };

// One synthetic pair of dependent series:
//   X_i = alpha e_ci + (1 - alpha) e_xi,
//   Y_i = alpha e_ci + (1 - alpha) e_yi,
// with the three error streams either independent Brownian motions (iid) or
// functional AR(1) recursions driven by Brownian motion with kernel
// min(t, s), spun up through a burn-in from zero initial curves.
struct DgpSpec {
  DgpKind kind = DgpKind::iid;
  double alpha = 0.0;
  int t = 0;
  int r = 100;
  int burn_in = 100;  // far1 only
  std::uint64_t seed = 0;
};

// Standard Brownian motion on the grid: partial sums of N(0, 1/R) steps.
Eigen::VectorXd sim_brownian_motion(const Grid& grid, RngStream& rng);

BivariateSeries sim_pair(const DgpSpec& spec);

enum class StatKind { norm_f, proj_f, norm_z, proj_z };

std::string stat_name(StatKind s);

// One cell of a size or power study: a DGP configuration plus the test
// pipeline parameters. Replication s derives its own data seed, so the same
// master seed always regenerates the same datasets no matter which
// statistics are requested.
struct StudyConfig {
  DgpKind kind = DgpKind::iid;
  int t = 300;
  int r = 100;
  double alpha = 0.0;
  int q = 3;
  int p = 3;
  std::optional<int> h;  // default: bandwidth rule on T
  std::vector<double> levels{0.10, 0.05, 0.01};
  std::vector<StatKind> stats{StatKind::norm_f, StatKind::proj_f};
  int n_sims = 1000;
  int burn_in = 100;  // far1 only
  int chisq_reps = kDefaultNullReps;
  int bridge_reps = kDefaultNullReps;
  int bridge_grid = kDefaultBridgeGrid;
  std::uint64_t seed = 0;
};

struct SizeRow {
  std::string statistic;
  std::string kind;
  int t;
  double alpha;
  double level;
  double rate;
};

// Monte Carlo rejection rates under the configured DGP. Under alpha with no
// change point these are empirical sizes; the power harness reuses the same
// machinery over a grid of alphas.
std::vector<SizeRow> run_size_study(const StudyConfig& cfg);

// Rejection rates of the norm and projection tests of H0: C = 0 across a
// grid of alphas at one level. The alpha = 0 column reproduces the size
// study at the same seed because data seeds do not depend on alpha.
std::vector<SizeRow> run_power_curve(const StudyConfig& base,
                                     const std::vector<double>& alphas,
                                     double level);

}
