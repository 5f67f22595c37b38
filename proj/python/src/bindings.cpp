// Python bindings for the fxcov core. The surface is deliberately
// numpy-centric: curve panels travel as T x R float64 arrays (one row per
// curve, columns are the intraday grid), surfaces as R x R arrays, and the
// richer pipeline calls return plain dicts shaped like the CLI's JSON
// report. Anything heavier (CSV handling, manifests) stays in the CLI.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "fxcov/crosscov.hpp"
#include "fxcov/dgp.hpp"
#include "fxcov/fdata.hpp"
#include "fxcov/fpca.hpp"
#include "fxcov/limits.hpp"
#include "fxcov/lrc.hpp"
#include "fxcov/rng.hpp"
#include "fxcov/stats.hpp"

namespace py = pybind11;
using namespace fxcov;

namespace {

FunctionalSeries make_series(const Eigen::MatrixXd& values) {
  if (values.rows() < 1 || values.cols() < 1)
    throw ConformabilityError("curve panel must be a nonempty T x R array");
  return FunctionalSeries(Grid(static_cast<int>(values.cols())), values);
}

BivariateSeries make_pair(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          int lag) {
  return apply_lag(make_series(x), make_series(y), lag);
}

struct Pipeline {
  BivariateSeries pair;
  FpcBasis bx;
  FpcBasis by;
  SpectrumEstimate sp;
  int h;
};

// Shared front end of both test entry points: lag the pair, pick the fPC
// truncation (q = 0 means "smallest q explaining share v"), resolve the
// bandwidth (h < 0 means the default rule), and estimate the spectrum.
Pipeline run_pipeline(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      int lag, int q, double v, int h) {
  BivariateSeries pair = make_pair(x, y, lag);
  FpcBasis bx = q > 0 ? fpc_basis_fixed(pair.x(), q) : fpc_basis(pair.x(), v);
  FpcBasis by = q > 0 ? fpc_basis_fixed(pair.y(), q) : fpc_basis(pair.y(), v);
  int h_used = h >= 0 ? h : default_bandwidth(pair.length());
  if (h_used >= pair.length())
    throw ConformabilityError("bandwidth must be smaller than the sample");
  SpectrumEstimate sp = estimate_spectrum(pair, bx, by, h_used);
  return Pipeline{std::move(pair), std::move(bx), std::move(by),
                  std::move(sp), h_used};
}

py::dict spectrum_dict(const Pipeline& pl, int p) {
  py::dict d;
  d["lambdas"] = pl.sp.eigenvalues;
  d["q_x"] = pl.bx.q;
  d["q_y"] = pl.by.q;
  d["p"] = p;
  d["h"] = pl.h;
  d["variance_explained_x"] = pl.bx.variance_explained;
  d["variance_explained_y"] = pl.by.variance_explained;
  d["n_clipped"] = pl.sp.n_clipped;
  d["clipped_mass"] = pl.sp.clipped_mass;
  return d;
}

py::dict test_entry(const std::string& name, double value,
                    const NullDistribution& null) {
  py::dict d;
  d["statistic"] = name;
  d["value"] = value;
  d["p_value"] = null.p_value(value);
  py::dict quantiles;
  quantiles["0.90"] = null.quantile(0.90);
  quantiles["0.95"] = null.quantile(0.95);
  quantiles["0.99"] = null.quantile(0.99);
  d["quantiles"] = quantiles;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Inference for lagged cross-covariance of functional time series";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConformabilityError>(m, "ConformabilityError",
                                              PyExc_ValueError);
  py::register_exception<DegenerateSpectrumError>(
      m, "DegenerateSpectrumError", PyExc_RuntimeError);

  m.def(
      "cidr",
      [](const Eigen::MatrixXd& prices) {
        return cidr_transform(make_series(prices)).values();
      },
      py::arg("prices"),
      "Cumulative intraday return curves: 100 * (log p(t_j) - log p(t_1)) "
      "per row of a positive price panel.");

  m.def(
      "simulate_pair",
      [](const std::string& kind, double alpha, int t, int r, int burn_in,
         std::uint64_t seed) {
        DgpKind k;
        if (kind == "iid")
          k = DgpKind::iid;
        else if (kind == "far1")
          k = DgpKind::far1;
        else
          throw std::invalid_argument("kind must be 'iid' or 'far1'");
        DgpSpec spec{k, alpha, t, r, burn_in, seed};
        BivariateSeries b = sim_pair(spec);
        return std::make_pair(b.x().values(), b.y().values());
      },
      py::arg("kind"), py::arg("alpha"), py::arg("t"), py::arg("r") = 100,
      py::arg("burn_in") = 100, py::arg("seed") = 0,
      "Simulate a coupled pair of functional series; returns (x, y) as "
      "T x R arrays.");

  m.def(
      "cross_covariance",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int lag,
         double fraction) {
        return partial_cross_cov(make_pair(x, y, lag), fraction)
            .surface.values();
      },
      py::arg("x"), py::arg("y"), py::arg("lag") = 0,
      py::arg("fraction") = 1.0,
      "Empirical (partial-sample) lag-`lag` cross-covariance surface, "
      "R x R. fraction < 1 sums only the first floor(T * fraction) terms "
      "(full-sample means throughout).");

  m.def(
      "test_cross_cov",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int lag, int q,
         double v, int p, int h, std::optional<Eigen::MatrixXd> c0, int reps,
         std::uint64_t seed) {
        Pipeline pl = run_pipeline(x, y, lag, q, v, h);
        Surface c0_surface =
            c0 ? Surface(pl.pair.grid(), *c0) : Surface::zero(pl.pair.grid());
        py::list tests;
        tests.append(test_entry(
            "F", stat_F(pl.pair, c0_surface),
            sim_weighted_chisq(pl.sp.eigenvalues, reps,
                               derive_seed(seed, kSeedTagChisqNull, 0))));
        tests.append(test_entry("Fp", stat_Fp(pl.pair, pl.sp, p, c0_surface),
                                chisq_null(p)));
        py::dict out;
        out["tests"] = tests;
        out["spectrum"] = spectrum_dict(pl, p);
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("lag") = 0, py::arg("q") = 0,
      py::arg("v") = 0.90, py::arg("p") = 3, py::arg("h") = -1,
      py::arg("c0") = py::none(), py::arg("reps") = kDefaultNullReps,
      py::arg("seed") = 0,
      "Test H0: C_XY = c0 (default zero surface). Returns the norm statistic "
      "F with its simulated weighted-chi-square null and the projected "
      "statistic Fp with its exact chi-square(p) null. q = 0 picks the fPC "
      "truncation by explained share v; h = -1 uses the bandwidth rule.");

  m.def(
      "changepoint",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int lag, int q,
         double v, int p, int h, int reps, int grid, std::uint64_t seed) {
        Pipeline pl = run_pipeline(x, y, lag, q, v, h);
        CusumResult z = stat_Z(pl.pair);
        CusumResult zp = stat_Zp(pl.pair, pl.sp, p);
        NullDistribution z_null = sim_sup_weighted_bridges(
            pl.sp.eigenvalues, grid, reps,
            derive_seed(seed, kSeedTagBridgeNull, 0));
        NullDistribution zp_null = sim_kiefer(
            p, grid, reps, derive_seed(seed, kSeedTagKieferNull, 0));
        py::dict dz = test_entry("Z", z.value, z_null);
        dz["k_hat"] = z.k_hat;
        dz["trajectory"] = z.trajectory;
        py::dict dzp = test_entry("Zp", zp.value, zp_null);
        dzp["k_hat"] = zp.k_hat;
        dzp["trajectory"] = zp.trajectory;
        py::list tests;
        tests.append(dz);
        tests.append(dzp);
        py::dict out;
        out["tests"] = tests;
        out["spectrum"] = spectrum_dict(pl, p);
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("lag") = 0, py::arg("q") = 0,
      py::arg("v") = 0.90, py::arg("p") = 3, py::arg("h") = -1,
      py::arg("reps") = kDefaultNullReps, py::arg("grid") = kDefaultBridgeGrid,
      py::arg("seed") = 0,
      "CUSUM change-point tests for the cross-covariance. Returns the norm "
      "statistic Z (sup of weighted squared bridges null, simulated) and the "
      "projected statistic Zp (Kiefer-type null), each with the interior "
      "argmax k_hat and the full CUSUM trajectory T * cusum(k), k = 0..T.");

  m.def(
      "spectrum_eigenvalues",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int lag, int q,
         double v, int h) {
        return run_pipeline(x, y, lag, q, v, h).sp.eigenvalues;
      },
      py::arg("x"), py::arg("y"), py::arg("lag") = 0, py::arg("q") = 0,
      py::arg("v") = 0.90, py::arg("h") = -1,
      "Eigenvalues of the estimated long-run covariance operator of the "
      "product array, descending, negatives clipped to zero.");

  m.def(
      "sim_weighted_chisq",
      [](const Eigen::VectorXd& lambdas, int reps, std::uint64_t seed) {
        return sim_weighted_chisq(lambdas, reps, seed).samples;
      },
      py::arg("lambdas"), py::arg("reps") = kDefaultNullReps,
      py::arg("seed") = 0,
      "Sorted Monte Carlo sample of sum_i lambda_i * N_i^2.");

  m.def(
      "sim_sup_weighted_bridges",
      [](const Eigen::VectorXd& lambdas, int grid, int reps,
         std::uint64_t seed) {
        return sim_sup_weighted_bridges(lambdas, grid, reps, seed).samples;
      },
      py::arg("lambdas"), py::arg("grid") = kDefaultBridgeGrid,
      py::arg("reps") = kDefaultNullReps, py::arg("seed") = 0,
      "Sorted Monte Carlo sample of sup_x sum_i lambda_i * B_i(x)^2.");

  m.def(
      "sim_kiefer",
      [](int p, int grid, int reps, std::uint64_t seed) {
        return sim_kiefer(p, grid, reps, seed).samples;
      },
      py::arg("p"), py::arg("grid") = kDefaultBridgeGrid,
      py::arg("reps") = kDefaultNullReps, py::arg("seed") = 0,
      "Sorted Monte Carlo sample of sup_x sum_{i<=p} B_i(x)^2.");

  m.def("chisq_p_pvalue", &chisq_p_pvalue, py::arg("stat"), py::arg("p"),
        "Exact chi-square(p) upper tail probability.");

  m.def("default_bandwidth", &default_bandwidth, py::arg("t"),
        "Bartlett bandwidth rule used when none is given.");
}
