#include "fxcov/dgp.hpp"

#include <cmath>
#include <stdexcept>

#include "fxcov/crosscov.hpp"
#include "fxcov/fpca.hpp"
#include "fxcov/lrc.hpp"
#include "fxcov/stats.hpp"

namespace fxcov {

namespace {

void fill_bm(Eigen::Ref<Eigen::VectorXd> path, RngStream& rng) {
  const int r = static_cast<int>(path.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(r));
  double acc = 0.0;
  for (int j = 0; j < r; ++j) {
    acc += scale * rng.normal();
    path[j] = acc;
  }
}

void check_spec(const DgpSpec& spec) {
  if (spec.t < 2) throw std::invalid_argument("need at least two curves");
  if (spec.r < 1) throw std::invalid_argument("grid size must be positive");
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0, 1]");
  if (spec.burn_in < 0) throw std::invalid_argument("burn-in must be >= 0");
}

}

Eigen::VectorXd sim_brownian_motion(const Grid& grid, RngStream& rng) {
  Eigen::VectorXd path(grid.size());
  fill_bm(path, rng);
  return path;
}

BivariateSeries sim_pair(const DgpSpec& spec) {
  check_spec(spec);
  const Grid grid(spec.r);
  const double a = spec.alpha, b = 1.0 - spec.alpha;
  RngStream rng(spec.seed, 0);
  Eigen::MatrixXd x(spec.t, spec.r), y(spec.t, spec.r);

  if (spec.kind == DgpKind::iid) {
    Eigen::VectorXd ec(spec.r), ex(spec.r), ey(spec.r);
    for (int i = 0; i < spec.t; ++i) {
      fill_bm(ec, rng);
      fill_bm(ex, rng);
      fill_bm(ey, rng);
      x.row(i) = (a * ec + b * ex).transpose();
      y.row(i) = (a * ec + b * ey).transpose();
    }
  } else {
    // AR kernel min(t_j, t_k) discretized with the 1/R quadrature weight.
    Eigen::MatrixXd kernel(spec.r, spec.r);
    const Eigen::VectorXd pts = grid.points();
    for (int j = 0; j < spec.r; ++j)
      for (int k = 0; k < spec.r; ++k)
        kernel(j, k) = std::min(pts[j], pts[k]) / spec.r;

    // Three error streams evolve together; columns are (common, x, y).
    Eigen::MatrixXd state = Eigen::MatrixXd::Zero(spec.r, 3);
    Eigen::MatrixXd noise(spec.r, 3), next(spec.r, 3);
    for (int step = 0; step < spec.burn_in + spec.t; ++step) {
      for (int c = 0; c < 3; ++c) fill_bm(noise.col(c), rng);
      next.noalias() = kernel * state;
      state = next + noise;
      if (step >= spec.burn_in) {
        const int i = step - spec.burn_in;
        x.row(i) = (a * state.col(0) + b * state.col(1)).transpose();
        y.row(i) = (a * state.col(0) + b * state.col(2)).transpose();
      }
    }
  }
  return BivariateSeries(FunctionalSeries(grid, std::move(x)),
                         FunctionalSeries(grid, std::move(y)));
}

std::string stat_name(StatKind s) {
  switch (s) {
    case StatKind::norm_f: return "F";
    case StatKind::proj_f: return "Fp";
    case StatKind::norm_z: return "Z";
    case StatKind::proj_z: return "Zp";
  }
  throw std::logic_error("unreachable");
}

std::vector<SizeRow> run_size_study(const StudyConfig& cfg) {
  if (cfg.n_sims < 1)
    throw std::invalid_argument("simulation count must be positive");
  if (cfg.stats.empty())
    throw std::invalid_argument("no statistics requested");
  for (double lv : cfg.levels)
    if (!(lv > 0.0 && lv < 1.0))
      throw std::invalid_argument("levels must lie in (0, 1)");

  const int h = cfg.h ? *cfg.h : default_bandwidth(cfg.t);

  bool want_f = false, want_fp = false, want_z = false, want_zp = false;
  for (StatKind s : cfg.stats) {
    want_f |= s == StatKind::norm_f;
    want_fp |= s == StatKind::proj_f;
    want_z |= s == StatKind::norm_z;
    want_zp |= s == StatKind::proj_z;
  }

  // Laws that do not depend on the data are built once.
  const NullDistribution chisq = chisq_null(cfg.p);
  NullDistribution kiefer{NullKind::kiefer_p, {}, 0, {}, 0, 0, 0};
  if (want_zp)
    kiefer = sim_kiefer(cfg.p, cfg.bridge_grid, cfg.bridge_reps,
                        derive_seed(cfg.seed, kSeedTagKieferNull, 0));

  std::vector<std::vector<int>> hits(cfg.stats.size(),
                                     std::vector<int>(cfg.levels.size(), 0));

  for (int s = 0; s < cfg.n_sims; ++s) {
    DgpSpec dspec{cfg.kind, cfg.alpha, cfg.t, cfg.r, cfg.burn_in,
                  derive_seed(cfg.seed, kSeedTagData, s)};
    const BivariateSeries pair = sim_pair(dspec);
    const FpcBasis bx = fpc_basis_fixed(pair.x(), cfg.q);
    const FpcBasis by = fpc_basis_fixed(pair.y(), cfg.q);
    const SpectrumEstimate sp = estimate_spectrum(pair, bx, by, h);
    const Surface zero = Surface::zero(pair.grid());

    std::vector<double> pvals(cfg.stats.size());
    for (std::size_t j = 0; j < cfg.stats.size(); ++j) {
      switch (cfg.stats[j]) {
        case StatKind::norm_f: {
          const double f = stat_F(pair, zero);
          const NullDistribution null = sim_weighted_chisq(
              sp.eigenvalues, cfg.chisq_reps,
              derive_seed(cfg.seed, kSeedTagChisqNull, s));
          pvals[j] = null.p_value(f);
          break;
        }
        case StatKind::proj_f:
          pvals[j] = chisq.p_value(stat_Fp(pair, sp, cfg.p, zero));
          break;
        case StatKind::norm_z: {
          const CusumResult z = stat_Z(pair);
          const NullDistribution null = sim_sup_weighted_bridges(
              sp.eigenvalues, cfg.bridge_grid, cfg.bridge_reps,
              derive_seed(cfg.seed, kSeedTagBridgeNull, s));
          pvals[j] = null.p_value(z.value);
          break;
        }
        case StatKind::proj_z:
          pvals[j] = kiefer.p_value(stat_Zp(pair, sp, cfg.p).value);
          break;
      }
    }
    for (std::size_t j = 0; j < cfg.stats.size(); ++j)
      for (std::size_t lv = 0; lv < cfg.levels.size(); ++lv)
        if (pvals[j] <= cfg.levels[lv]) ++hits[j][lv];
  }

  std::vector<SizeRow> rows;
  const char* kind = cfg.kind == DgpKind::iid ? "iid" : "far1";
  for (std::size_t j = 0; j < cfg.stats.size(); ++j)
    for (std::size_t lv = 0; lv < cfg.levels.size(); ++lv)
      rows.push_back(SizeRow{stat_name(cfg.stats[j]), kind, cfg.t, cfg.alpha,
                             cfg.levels[lv],
                             static_cast<double>(hits[j][lv]) / cfg.n_sims});
  return rows;
}

std::vector<SizeRow> run_power_curve(const StudyConfig& base,
                                     const std::vector<double>& alphas,
                                     double level) {
  if (alphas.empty()) throw std::invalid_argument("empty alpha grid");
  std::vector<SizeRow> rows;
  for (double alpha : alphas) {
    StudyConfig cfg = base;
    cfg.alpha = alpha;
    cfg.levels = {level};
    for (const SizeRow& row : run_size_study(cfg)) rows.push_back(row);
  }
  return rows;
}

}
