// Command-line front end: CSV in, JSON/CSV out. Subcommands cover the
// specified-covariance test, the change-point scan, CIDR preprocessing, and
// the simulation harness.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fxcov/crosscov.hpp"
#include "fxcov/csv.hpp"
#include "fxcov/dgp.hpp"
#include "fxcov/errors.hpp"
#include "fxcov/fpca.hpp"
#include "fxcov/limits.hpp"
#include "fxcov/lrc.hpp"
#include "fxcov/stats.hpp"
#include "fxcov/version.hpp"

using nlohmann::ordered_json;
using namespace fxcov;

namespace {

// Exit codes promised to callers.
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitParse = 2;
constexpr int kExitConformability = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitFlags = 5;

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// Probability label for a quantile key: "0.90" style for two-digit levels,
// full precision otherwise.
std::string prob_key(double upper) {
  double scaled = upper * 100.0;
  if (std::abs(scaled - std::round(scaled)) < 1e-9) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", upper);
    return buf;
  }
  return format_double(upper);
}

// ---------------------------------------------------------------------------
// Option bundles and the manifest
// ---------------------------------------------------------------------------

struct PipelineOpts {
  std::string x_path;
  std::string y_path;
  bool labels = false;
  bool cidr = false;
  int lag = 0;
  std::string q = "auto";
  double v = 0.90;
  int p = 3;
  std::string h = "auto";
  int reps = 10000;
  int grid = 1000;
  std::uint64_t seed = 0;
  std::vector<double> levels{0.10, 0.05, 0.01};
  std::string stat = "both";
  std::string c0_path;
  std::string out_path;
  // changepoint only
  std::string trajectory_path = "cusum.csv";
  bool segment = false;
};

// One manifest row per parameter: the resolved value, the built-in default,
// and whether the user moved it off the default.
class Manifest {
 public:
  Manifest(std::string subcommand, std::vector<std::string> inputs)
      : subcommand_(std::move(subcommand)), inputs_(std::move(inputs)) {}

  void add(const std::string& name, ordered_json value, ordered_json def,
           bool overridden) {
    params_[name] = ordered_json{
        {"value", std::move(value)}, {"default", std::move(def)},
        {"overridden", overridden}};
  }

  ordered_json to_json() const {
    ordered_json j;
    j["subcommand"] = subcommand_;
    j["inputs"] = inputs_;
    j["version"] = kVersion;
    j["timestamp"] = iso_timestamp();
    j["parameters"] = params_;
    return j;
  }

 private:
  std::string subcommand_;
  std::vector<std::string> inputs_;
  ordered_json params_ = ordered_json::object();
};

// CLI11 bookkeeping: was this flag passed explicitly?
bool moved(const CLI::App* cmd, const std::string& flag) {
  return cmd->count(flag) > 0;
}

void record_pipeline_params(Manifest& m, const CLI::App* cmd,
                            const PipelineOpts& o, bool changepoint) {
  m.add("labels", o.labels, false, moved(cmd, "--labels"));
  m.add("cidr", o.cidr, false, moved(cmd, "--cidr"));
  m.add("lag", o.lag, 0, moved(cmd, "--lag"));
  m.add("q", o.q, "auto", moved(cmd, "--q"));
  m.add("v", o.v, 0.90, moved(cmd, "--v"));
  m.add("p", o.p, 3, moved(cmd, "--p"));
  m.add("h", o.h, "auto", moved(cmd, "--h"));
  m.add("reps", o.reps, 10000, moved(cmd, "--reps"));
  m.add("grid", o.grid, 1000, moved(cmd, "--grid"));
  m.add("seed", o.seed, 0, moved(cmd, "--seed"));
  m.add("level", o.levels, std::vector<double>{0.10, 0.05, 0.01},
        moved(cmd, "--level"));
  m.add("stat", o.stat, "both", moved(cmd, "--stat"));
  if (!changepoint)
    m.add("c0", o.c0_path.empty() ? ordered_json("zero")
                                  : ordered_json(o.c0_path),
          "zero", moved(cmd, "--c0"));
  if (changepoint) {
    m.add("trajectory", o.trajectory_path, "cusum.csv",
          moved(cmd, "--trajectory"));
    m.add("segment", o.segment, false, moved(cmd, "--segment"));
  }
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces
// ---------------------------------------------------------------------------

struct LoadedPair {
  BivariateSeries b;
  std::vector<std::string> y_labels;  // aligned with pair index after lag
};

FunctionalSeries to_series(const CsvMatrix& m, bool cidr) {
  FunctionalSeries s(Grid(static_cast<int>(m.values.cols())), m.values);
  return cidr ? cidr_transform(s) : s;
}

LoadedPair load_pair(const PipelineOpts& o) {
  CsvMatrix mx = read_csv_matrix(o.x_path, o.labels);
  CsvMatrix my = read_csv_matrix(o.y_path, o.labels);
  FunctionalSeries x = to_series(mx, o.cidr);
  FunctionalSeries y = to_series(my, o.cidr);
  if (o.lag >= x.length()) {
    std::cerr << "fxcov: --lag " << o.lag << " needs a series longer than "
              << o.lag << " (got T = " << x.length() << ")\n";
    std::exit(kExitFlags);
  }
  BivariateSeries b = apply_lag(x, y, o.lag);
  std::vector<std::string> labels;
  if (my.has_labels) {
    labels.assign(my.labels.begin(), my.labels.begin() + b.length());
  }
  return LoadedPair{std::move(b), std::move(labels)};
}

struct ResolvedBases {
  FpcBasis bx;
  FpcBasis by;
  int h;
  bool q_auto;
  bool h_auto;
};

int parse_positive(const std::string& text, const char* flag) {
  try {
    std::size_t pos = 0;
    int value = std::stoi(text, &pos);
    if (pos == text.size() && value >= 1) return value;
  } catch (const std::exception&) {
  }
  std::cerr << "fxcov: " << flag << " expects 'auto' or a positive integer, got '"
            << text << "'\n";
  std::exit(kExitFlags);
}

ResolvedBases resolve_bases(const BivariateSeries& b, const PipelineOpts& o) {
  ResolvedBases r{FpcBasis{Grid(1), {}, {}, 0, 0.0, false},
                  FpcBasis{Grid(1), {}, {}, 0, 0.0, false}, 0, false, false};
  if (o.q == "auto") {
    r.q_auto = true;
    r.bx = fpc_basis(b.x(), o.v);
    r.by = fpc_basis(b.y(), o.v);
  } else {
    int q = parse_positive(o.q, "--q");
    if (q > b.grid().size()) {
      std::cerr << "fxcov: --q " << q << " exceeds the grid size "
                << b.grid().size() << "\n";
      std::exit(kExitFlags);
    }
    r.bx = fpc_basis_fixed(b.x(), q);
    r.by = fpc_basis_fixed(b.y(), q);
  }
  if (o.h == "auto") {
    r.h_auto = true;
    r.h = default_bandwidth(b.length());
  } else {
    r.h = parse_positive(o.h, "--h");
  }
  if (r.h >= b.length()) {
    std::cerr << "fxcov: bandwidth " << r.h
              << " must be smaller than the sample length " << b.length()
              << "\n";
    std::exit(kExitFlags);
  }
  if (o.p > r.bx.q * r.by.q) {
    std::cerr << "fxcov: --p " << o.p << " exceeds q_x * q_y = "
              << r.bx.q * r.by.q << " retained product directions\n";
    std::exit(kExitFlags);
  }
  return r;
}

ordered_json spectrum_json(const SpectrumEstimate& sp, int p) {
  ordered_json j;
  j["lambdas"] = std::vector<double>(
      sp.eigenvalues.data(), sp.eigenvalues.data() + sp.eigenvalues.size());
  j["variance_explained"] = ordered_json{{"x", sp.basis_x.variance_explained},
                                         {"y", sp.basis_y.variance_explained}};
  j["q"] = ordered_json{{"x", sp.basis_x.q}, {"y", sp.basis_y.q}};
  j["p"] = p;
  j["h"] = sp.h;
  j["n_clipped"] = sp.n_clipped;
  j["clipped_mass"] = sp.clipped_mass;
  if (sp.basis_x.gap_warning || sp.basis_y.gap_warning)
    j["gap_warning"] = true;
  return j;
}

ordered_json quantiles_json(const NullDistribution& null,
                            const std::vector<double>& levels) {
  ordered_json q;
  for (double level : levels) q[prob_key(1.0 - level)] = null.quantile(1.0 - level);
  return q;
}

void emit_report(const ordered_json& report, const std::string& out_path) {
  std::string text = report.dump(2);
  text.push_back('\n');
  std::cout << text;
  if (!out_path.empty()) write_text_atomic(out_path, text);
}

// ---------------------------------------------------------------------------
// fxcov test
// ---------------------------------------------------------------------------

int run_test(const CLI::App* cmd, const PipelineOpts& o) {
  LoadedPair loaded = load_pair(o);
  const BivariateSeries& b = loaded.b;
  ResolvedBases bases = resolve_bases(b, o);
  SpectrumEstimate sp = estimate_spectrum(b, bases.bx, bases.by, bases.h);
  std::cerr << "fxcov: bandwidth h = " << sp.h
            << (bases.h_auto ? " (auto)" : "") << "\n";

  Surface c0 = Surface::zero(b.grid());
  if (!o.c0_path.empty()) {
    CsvMatrix mc = read_csv_matrix(o.c0_path, false);
    if (mc.values.rows() != b.grid().size() ||
        mc.values.cols() != b.grid().size())
      throw ConformabilityError(
          "reference surface must be R x R on the data grid (R = " +
          std::to_string(b.grid().size()) + ")");
    c0 = Surface(b.grid(), mc.values);
  }

  const bool want_norm = o.stat == "norm" || o.stat == "both";
  const bool want_proj = o.stat == "proj" || o.stat == "both";
  ordered_json tests = ordered_json::array();
  if (want_norm) {
    double f = stat_F(b, c0);
    auto null = sim_weighted_chisq(sp.eigenvalues, o.reps,
                                   derive_seed(o.seed, kSeedTagChisqNull, 0));
    ordered_json t;
    t["statistic"] = "F";
    t["value"] = f;
    t["p_value"] = null.p_value(f);
    t["quantiles"] = quantiles_json(null, o.levels);
    tests.push_back(std::move(t));
  }
  if (want_proj) {
    double f = stat_Fp(b, sp, o.p, c0);
    auto null = chisq_null(o.p);
    ordered_json t;
    t["statistic"] = "Fp";
    t["p"] = o.p;
    t["value"] = f;
    t["p_value"] = null.p_value(f);
    t["quantiles"] = quantiles_json(null, o.levels);
    tests.push_back(std::move(t));
  }

  Manifest manifest("test", {o.x_path, o.y_path});
  record_pipeline_params(manifest, cmd, o, false);
  manifest.add("resolved_q",
               ordered_json{{"x", bases.bx.q}, {"y", bases.by.q}},
               ordered_json("auto"), moved(cmd, "--q"));
  manifest.add("resolved_h", sp.h, ordered_json("auto"), moved(cmd, "--h"));

  ordered_json report;
  report["report"] = "test";
  report["length"] = b.length();
  report["grid_size"] = b.grid().size();
  report["lag"] = b.lag();
  report["tests"] = std::move(tests);
  report["spectrum"] = spectrum_json(sp, o.p);
  report["manifest"] = manifest.to_json();
  emit_report(report, o.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fxcov changepoint
// ---------------------------------------------------------------------------

struct CusumOutput {
  ordered_json tests = ordered_json::array();
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_columns;
};

CusumOutput changepoint_tests(const BivariateSeries& b,
                              const SpectrumEstimate& sp,
                              const std::vector<std::string>& labels,
                              const PipelineOpts& o, bool with_trajectory) {
  CusumOutput out;
  const bool want_norm = o.stat == "norm" || o.stat == "both";
  const bool want_proj = o.stat == "proj" || o.stat == "both";
  const int t = b.length();
  if (with_trajectory) {
    out.csv_header = {"k", "x"};
    std::vector<double> ks(t + 1), xs(t + 1);
    for (int k = 0; k <= t; ++k) {
      ks[k] = k;
      xs[k] = static_cast<double>(k) / t;
    }
    out.csv_columns.push_back(std::move(ks));
    out.csv_columns.push_back(std::move(xs));
  }

  auto add_stat = [&](const char* name, const CusumResult& res,
                      const NullDistribution& null, std::optional<int> p) {
    ordered_json j;
    j["statistic"] = name;
    if (p) j["p"] = *p;
    j["value"] = res.value;
    j["k_hat"] = res.k_hat;
    if (!labels.empty() && res.k_hat >= 1 &&
        res.k_hat <= static_cast<int>(labels.size()))
      j["k_hat_label"] = labels[res.k_hat - 1];
    j["p_value"] = null.p_value(res.value);
    j["quantiles"] = quantiles_json(null, o.levels);
    out.tests.push_back(std::move(j));
    if (with_trajectory) {
      out.csv_header.push_back(name);
      out.csv_columns.push_back(res.trajectory);
      for (double level : o.levels) {
        out.csv_header.push_back(std::string("crit_") + name + "_" +
                                 prob_key(1.0 - level));
        out.csv_columns.push_back(
            std::vector<double>(t + 1, null.quantile(1.0 - level)));
      }
    }
  };

  if (want_norm) {
    CusumResult res = stat_Z(b);
    auto null =
        sim_sup_weighted_bridges(sp.eigenvalues, o.grid, o.reps,
                                 derive_seed(o.seed, kSeedTagBridgeNull, 0));
    add_stat("Z", res, null, std::nullopt);
  }
  if (want_proj) {
    CusumResult res = stat_Zp(b, sp, o.p);
    auto null = sim_kiefer(o.p, o.grid, o.reps,
                           derive_seed(o.seed, kSeedTagKieferNull, 0));
    add_stat("Zp", res, null, o.p);
  }
  return out;
}

// Minimum sub-sample length worth re-testing when --segment is given.
constexpr int kMinSegmentLength = 16;

ordered_json segment_report(const BivariateSeries& b,
                            const std::vector<std::string>& labels,
                            const PipelineOpts& o, int start_row) {
  ordered_json j;
  j["start_row"] = start_row;
  j["end_row"] = start_row + b.length() - 1;
  j["length"] = b.length();
  if (b.length() < kMinSegmentLength) {
    j["skipped"] = "segment shorter than " +
                   std::to_string(kMinSegmentLength) + " curves";
    return j;
  }
  ResolvedBases bases = resolve_bases(b, o);
  SpectrumEstimate sp = estimate_spectrum(b, bases.bx, bases.by, bases.h);
  CusumOutput out = changepoint_tests(b, sp, labels, o, false);
  j["tests"] = std::move(out.tests);
  j["spectrum"] = spectrum_json(sp, o.p);
  return j;
}

int run_changepoint(const CLI::App* cmd, const PipelineOpts& o) {
  LoadedPair loaded = load_pair(o);
  const BivariateSeries& b = loaded.b;
  ResolvedBases bases = resolve_bases(b, o);
  SpectrumEstimate sp = estimate_spectrum(b, bases.bx, bases.by, bases.h);
  std::cerr << "fxcov: bandwidth h = " << sp.h
            << (bases.h_auto ? " (auto)" : "") << "\n";

  CusumOutput out = changepoint_tests(b, sp, loaded.y_labels, o, true);

  // Trajectory CSV: k, k/T, one column per statistic plus its critical lines.
  std::string csv;
  for (std::size_t c = 0; c < out.csv_header.size(); ++c) {
    if (c) csv.push_back(',');
    csv += out.csv_header[c];
  }
  csv.push_back('\n');
  const int rows = b.length() + 1;
  for (int k = 0; k < rows; ++k) {
    for (std::size_t c = 0; c < out.csv_columns.size(); ++c) {
      if (c) csv.push_back(',');
      csv += format_double(out.csv_columns[c][k]);
    }
    csv.push_back('\n');
  }
  write_text_atomic(o.trajectory_path, csv);

  ordered_json report;
  report["report"] = "changepoint";
  report["length"] = b.length();
  report["grid_size"] = b.grid().size();
  report["lag"] = b.lag();
  report["tests"] = std::move(out.tests);
  report["spectrum"] = spectrum_json(sp, o.p);
  report["trajectory"] = o.trajectory_path;

  if (o.segment) {
    // Split at the k_hat of the first reported statistic and rerun the scan
    // on both sub-samples, once.
    int k_hat = report["tests"][0]["k_hat"].get<int>();
    ordered_json segments = ordered_json::array();
    Eigen::MatrixXd x = b.x().values(), y = b.y().values();
    BivariateSeries head(
        FunctionalSeries(b.grid(), x.topRows(k_hat)),
        FunctionalSeries(b.grid(), y.topRows(k_hat)));
    BivariateSeries tail(
        FunctionalSeries(b.grid(), x.bottomRows(b.length() - k_hat)),
        FunctionalSeries(b.grid(), y.bottomRows(b.length() - k_hat)));
    std::vector<std::string> head_labels, tail_labels;
    if (!loaded.y_labels.empty()) {
      head_labels.assign(loaded.y_labels.begin(),
                         loaded.y_labels.begin() + k_hat);
      tail_labels.assign(loaded.y_labels.begin() + k_hat,
                         loaded.y_labels.end());
    }
    segments.push_back(segment_report(head, head_labels, o, 1));
    segments.push_back(segment_report(tail, tail_labels, o, k_hat + 1));
    report["segments"] = std::move(segments);
  }

  Manifest manifest("changepoint", {o.x_path, o.y_path});
  record_pipeline_params(manifest, cmd, o, true);
  manifest.add("resolved_q",
               ordered_json{{"x", bases.bx.q}, {"y", bases.by.q}},
               ordered_json("auto"), moved(cmd, "--q"));
  manifest.add("resolved_h", sp.h, ordered_json("auto"), moved(cmd, "--h"));
  report["manifest"] = manifest.to_json();
  emit_report(report, o.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fxcov cidr
// ---------------------------------------------------------------------------

int run_cidr(const CLI::App* cmd, const std::string& prices_path,
             const std::string& out_path, bool labels) {
  CsvMatrix m = read_csv_matrix(prices_path, labels);
  FunctionalSeries curves =
      cidr_transform(FunctionalSeries(Grid(static_cast<int>(m.values.cols())),
                                      m.values));
  write_csv_matrix(out_path, curves.values(),
                   m.has_labels ? &m.labels : nullptr);

  Manifest manifest("cidr", {prices_path});
  manifest.add("labels", labels, false, moved(cmd, "--labels"));
  manifest.add("out", out_path, "curves.csv", moved(cmd, "--out"));
  ordered_json report;
  report["report"] = "cidr";
  report["rows"] = static_cast<int>(curves.values().rows());
  report["grid_size"] = curves.grid().size();
  report["out"] = out_path;
  report["manifest"] = manifest.to_json();
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fxcov simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
  int table = 0;  // 1 or 2; 0 means --power
  bool power = false;
  std::string kind = "iid";
  int t = 300;
  int r = 100;
  double alpha = 0.0;
  std::vector<double> alphas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<double> levels{0.10, 0.05, 0.01};
  int q = 3;
  int p = 3;
  std::string h = "auto";
  int n_sims = 1000;
  int reps = 10000;
  int grid = 1000;
  int burn_in = 100;
  std::string stat = "both";
  std::uint64_t seed = 0;
  std::string out_path = "tables.csv";
};

std::string rows_to_csv(const std::vector<SizeRow>& rows) {
  std::string csv = "statistic,kind,t,alpha,level,rate\n";
  for (const auto& row : rows) {
    csv += row.statistic;
    csv += ',' + row.kind;
    csv += ',' + std::to_string(row.t);
    csv += ',' + format_double(row.alpha);
    csv += ',' + format_double(row.level);
    csv += ',' + format_double(row.rate);
    csv.push_back('\n');
  }
  return csv;
}

int run_simulate(const CLI::App* cmd, const SimulateOpts& o) {
  StudyConfig cfg;
  cfg.kind = o.kind == "far1" ? DgpKind::far1 : DgpKind::iid;
  cfg.t = o.t;
  cfg.r = o.r;
  cfg.alpha = o.alpha;
  cfg.q = o.q;
  cfg.p = o.p;
  if (o.h != "auto") cfg.h = parse_positive(o.h, "--h");
  cfg.levels = o.levels;
  cfg.n_sims = o.n_sims;
  cfg.burn_in = o.burn_in;
  cfg.chisq_reps = o.reps;
  cfg.bridge_reps = o.reps;
  cfg.bridge_grid = o.grid;
  cfg.seed = o.seed;

  const bool want_norm = o.stat == "norm" || o.stat == "both";
  const bool want_proj = o.stat == "proj" || o.stat == "both";
  cfg.stats.clear();
  if (o.table == 2) {
    if (want_norm) cfg.stats.push_back(StatKind::norm_z);
    if (want_proj) cfg.stats.push_back(StatKind::proj_z);
  } else {
    if (want_norm) cfg.stats.push_back(StatKind::norm_f);
    if (want_proj) cfg.stats.push_back(StatKind::proj_f);
  }

  std::vector<SizeRow> rows;
  if (o.power) {
    cfg.levels = {o.levels.front()};
    rows = run_power_curve(cfg, o.alphas, o.levels.front());
  } else {
    rows = run_size_study(cfg);
  }
  write_text_atomic(o.out_path, rows_to_csv(rows));

  Manifest manifest("simulate", {});
  manifest.add("table", o.table, 0, moved(cmd, "--table"));
  manifest.add("power", o.power, false, moved(cmd, "--power"));
  manifest.add("kind", o.kind, "iid", moved(cmd, "--kind"));
  manifest.add("T", o.t, 300, moved(cmd, "--T"));
  manifest.add("R", o.r, 100, moved(cmd, "--R"));
  manifest.add("alpha", o.alpha, 0.0, moved(cmd, "--alpha"));
  manifest.add("alphas", o.alphas,
               std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8},
               moved(cmd, "--alphas"));
  manifest.add("level", o.levels, std::vector<double>{0.10, 0.05, 0.01},
               moved(cmd, "--level"));
  manifest.add("q", o.q, 3, moved(cmd, "--q"));
  manifest.add("p", o.p, 3, moved(cmd, "--p"));
  manifest.add("h", o.h, "auto", moved(cmd, "--h"));
  manifest.add("n_sims", o.n_sims, 1000, moved(cmd, "--n-sims"));
  manifest.add("reps", o.reps, 10000, moved(cmd, "--reps"));
  manifest.add("grid", o.grid, 1000, moved(cmd, "--grid"));
  manifest.add("burn_in", o.burn_in, 100, moved(cmd, "--burn-in"));
  manifest.add("stat", o.stat, "both", moved(cmd, "--stat"));
  manifest.add("seed", o.seed, ordered_json(), true);
  manifest.add("out", o.out_path, "tables.csv", moved(cmd, "--out"));

  ordered_json report;
  report["report"] = "simulate";
  report["rows"] = static_cast<int>(rows.size());
  report["out"] = o.out_path;
  report["manifest"] = manifest.to_json();
  std::string manifest_path = o.out_path + ".manifest.json";
  write_text_atomic(manifest_path, report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

void attach_pipeline_flags(CLI::App* cmd, PipelineOpts& o, bool changepoint) {
  // The bandwidth flag is literally --h, so help must not claim -h.
  cmd->set_help_flag("--help", "print this help and exit");
  cmd->add_option("x", o.x_path, "CSV of X curves (rows = days)")
      ->required();
  cmd->add_option("y", o.y_path, "CSV of Y curves (rows = days)")
      ->required();
  cmd->add_flag("--labels", o.labels,
                "first CSV column holds row labels/dates");
  cmd->add_flag("--cidr", o.cidr,
                "treat inputs as price panels and apply the CIDR transform");
  cmd->add_option("--lag", o.lag, "cross-covariance lag (default 0)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--q", o.q,
                  "retained components per series: 'auto' or an integer");
  cmd->add_option("--v", o.v,
                  "variance threshold for --q auto (default 0.90)")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--p", o.p, "projection order (default 3)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--h", o.h, "lag window bandwidth: 'auto' or an integer");
  cmd->add_option("--reps", o.reps,
                  "Monte Carlo replications for the null law")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid", o.grid, "bridge grid for sup-type laws")
      ->check(CLI::Range(2, 1000000));
  cmd->add_option("--seed", o.seed, "master seed for the null simulations");
  cmd->add_option("--level", o.levels,
                  "test levels, comma separated (default 0.10,0.05,0.01)")
      ->delimiter(',')
      ->check(CLI::Range(1e-9, 0.999999));
  cmd->add_option("--stat", o.stat, "norm, proj, or both")
      ->check(CLI::IsMember({"norm", "proj", "both"}));
  cmd->add_option("--out", o.out_path, "also write the JSON report here");
  if (changepoint) {
    cmd->add_option("--trajectory", o.trajectory_path,
                    "CUSUM trajectory CSV path (default cusum.csv)");
    cmd->add_flag("--segment", o.segment,
                  "split at k_hat and rerun the scan on both sub-samples");
  } else {
    cmd->add_option("--c0", o.c0_path,
                    "reference surface CSV (default: the zero surface)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inference on the cross-covariance of two functional time "
               "series"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", kVersion);

  PipelineOpts test_opts;
  CLI::App* test_cmd = app.add_subcommand(
      "test", "Test H0: C_XY = C0 against the long-run limit law");
  attach_pipeline_flags(test_cmd, test_opts, false);

  PipelineOpts cp_opts;
  CLI::App* cp_cmd = app.add_subcommand(
      "changepoint", "CUSUM scan for a break in the cross-covariance");
  attach_pipeline_flags(cp_cmd, cp_opts, true);

  std::string cidr_in, cidr_out = "curves.csv";
  bool cidr_labels = false;
  CLI::App* cidr_cmd =
      app.add_subcommand("cidr", "Cumulative intraday return curves");
  cidr_cmd->set_help_flag("--help", "print this help and exit");
  cidr_cmd->add_option("prices", cidr_in, "CSV of intraday prices")
      ->required();
  cidr_cmd->add_option("--out", cidr_out, "output CSV (default curves.csv)");
  cidr_cmd->add_flag("--labels", cidr_labels,
                     "first CSV column holds row labels/dates");

  SimulateOpts sim_opts;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Size and power studies under the synthetic DGPs");
  sim_cmd->set_help_flag("--help", "print this help and exit");
  sim_cmd->add_option("--table", sim_opts.table,
                      "1: specified-covariance sizes, 2: change-point sizes")
      ->check(CLI::IsMember({1, 2}));
  sim_cmd->add_flag("--power", sim_opts.power,
                    "power curve over --alphas at the first --level");
  sim_cmd->add_option("--kind", sim_opts.kind, "iid or far1")
      ->check(CLI::IsMember({"iid", "far1"}));
  sim_cmd->add_option("--T", sim_opts.t, "series length (default 300)")
      ->check(CLI::Range(2, 100000000));
  sim_cmd->add_option("--R", sim_opts.r, "grid size (default 100)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--alpha", sim_opts.alpha, "mixing weight for tables")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--alphas", sim_opts.alphas,
                      "alpha grid for --power, comma separated")
      ->delimiter(',');
  sim_cmd->add_option("--level", sim_opts.levels,
                      "levels, comma separated (power uses the first)")
      ->delimiter(',')
      ->check(CLI::Range(1e-9, 0.999999));
  sim_cmd->add_option("--q", sim_opts.q, "retained components (default 3)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--p", sim_opts.p, "projection order (default 3)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--h", sim_opts.h, "'auto' or an integer bandwidth");
  sim_cmd->add_option("--n-sims", sim_opts.n_sims,
                      "datasets per cell (default 1000)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--reps", sim_opts.reps,
                      "null-law replications per dataset")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--grid", sim_opts.grid, "bridge grid for sup laws")
      ->check(CLI::Range(2, 1000000));
  sim_cmd->add_option("--burn-in", sim_opts.burn_in, "FAR(1) burn-in")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--stat", sim_opts.stat, "norm, proj, or both")
      ->check(CLI::IsMember({"norm", "proj", "both"}));
  sim_cmd->add_option("--seed", sim_opts.seed, "master seed")->required();
  sim_cmd->add_option("--out", sim_opts.out_path,
                      "output CSV (default tables.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return kExitFlags;
  }

  try {
    if (test_cmd->parsed()) return run_test(test_cmd, test_opts);
    if (cp_cmd->parsed()) return run_changepoint(cp_cmd, cp_opts);
    if (cidr_cmd->parsed())
      return run_cidr(cidr_cmd, cidr_in, cidr_out, cidr_labels);
    if (sim_cmd->parsed()) {
      if (sim_opts.power == (sim_opts.table != 0)) {
        std::cerr << "fxcov: simulate needs exactly one of --table or "
                     "--power\n";
        return kExitFlags;
      }
      return run_simulate(sim_cmd, sim_opts);
    }
  } catch (const ParseError& e) {
    std::cerr << "fxcov: parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConformabilityError& e) {
    std::cerr << "fxcov: conformability error: " << e.what() << "\n";
    return kExitConformability;
  } catch (const DegenerateSpectrumError& e) {
    std::cerr << "fxcov: degenerate spectrum: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fxcov: invalid data: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "fxcov: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
