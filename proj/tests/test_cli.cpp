#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fxcov/csv.hpp"
#include "fxcov/dgp.hpp"
#include "fxcov/fdata.hpp"

using namespace fxcov;
using nlohmann::json;
namespace fs = std::filesystem;

#ifndef FXCOV_CLI_PATH
#error "FXCOV_CLI_PATH must point at the fxcov binary"
#endif

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory shared by the whole binary run; per-call files are
// prefixed so cases do not collide.
const fs::path& scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("fxcov_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
  fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = std::string(FXCOV_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return CliResult{code, slurp(out), slurp(err)};
}

std::string write_pair_csv(const std::string& stem, int t, int r,
                           std::uint64_t seed, double alpha = 0.3) {
  DgpSpec spec{DgpKind::iid, alpha, t, r, 0, seed};
  auto b = sim_pair(spec);
  fs::path xp = scratch_dir() / (stem + "_x.csv");
  fs::path yp = scratch_dir() / (stem + "_y.csv");
  write_csv_matrix(xp.string(), b.x().values());
  write_csv_matrix(yp.string(), b.y().values());
  return (scratch_dir() / stem).string();
}

json strip_timestamp(json j) {
  if (j.contains("manifest")) j["manifest"].erase("timestamp");
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

TEST_CASE("cli: ragged csv exits with the parse code and names the row") {
  fs::path bad = scratch_dir() / "ragged.csv";
  std::ofstream(bad) << "1,2,3\n4,5\n";
  fs::path good = scratch_dir() / "good3.csv";
  std::ofstream(good) << "1,2,3\n4,5,6\n";
  auto res = run_cli("test " + bad.string() + " " + good.string());
  REQUIRE(res.exit_code == 2);
  REQUIRE(res.err.find("row 2") != std::string::npos);
}

TEST_CASE("cli: non-numeric cell exits with the parse code") {
  fs::path bad = scratch_dir() / "alpha.csv";
  std::ofstream(bad) << "1,2\n3,oops\n";
  auto res = run_cli("test " + bad.string() + " " + bad.string());
  REQUIRE(res.exit_code == 2);
  REQUIRE(res.err.find("oops") != std::string::npos);
}

TEST_CASE("cli: mismatched grids exit with the conformability code") {
  std::string stem = write_pair_csv("conform", 20, 8, 11);
  fs::path narrow = scratch_dir() / "narrow.csv";
  {
    DgpSpec spec{DgpKind::iid, 0.0, 20, 5, 0, 12};
    auto b = sim_pair(spec);
    write_csv_matrix(narrow.string(), b.x().values());
  }
  auto res = run_cli("test " + stem + "_x.csv " + narrow.string());
  REQUIRE(res.exit_code == 3);
}

TEST_CASE("cli: constant series exit with the degenerate-spectrum code") {
  fs::path flat = scratch_dir() / "flat.csv";
  {
    std::ofstream f(flat);
    for (int i = 0; i < 20; ++i) f << "1,1,1,1,1,1\n";
  }
  auto res = run_cli("test " + flat.string() + " " + flat.string() + " --q 2");
  REQUIRE(res.exit_code == 4);
}

TEST_CASE("cli: bad flag values exit with the usage code") {
  std::string stem = write_pair_csv("flags", 20, 6, 13);
  auto res =
      run_cli("test " + stem + "_x.csv " + stem + "_y.csv --stat bogus");
  REQUIRE(res.exit_code == 5);
  auto res2 = run_cli("test " + stem + "_x.csv " + stem + "_y.csv --q 99");
  REQUIRE(res2.exit_code == 5);
  auto res3 =
      run_cli("test " + stem + "_x.csv " + stem + "_y.csv --p 50 --q 2");
  REQUIRE(res3.exit_code == 5);
  auto res4 = run_cli("simulate --table 1");  // missing required --seed
  REQUIRE(res4.exit_code == 5);
  auto res5 = run_cli("simulate --seed 1");  // neither --table nor --power
  REQUIRE(res5.exit_code == 5);
}

TEST_CASE("cli: nonpositive price is a data error with a location") {
  fs::path neg = scratch_dir() / "neg.csv";
  std::ofstream(neg) << "10,20,30\n40,-5,60\n";
  auto res = run_cli("cidr " + neg.string());
  REQUIRE(res.exit_code == 2);
  REQUIRE(res.err.find("curve 2") != std::string::npos);
  REQUIRE(res.err.find("point 2") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Happy paths
// ---------------------------------------------------------------------------

TEST_CASE("cli: test subcommand emits the documented report schema") {
  std::string stem = write_pair_csv("happy", 60, 10, 21);
  fs::path report = scratch_dir() / "happy_report.json";
  auto res = run_cli("test " + stem + "_x.csv " + stem +
                     "_y.csv --seed 4 --reps 1500 --out " + report.string());
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.err.find("bandwidth") != std::string::npos);

  json j = json::parse(res.out);
  REQUIRE(j["report"] == "test");
  REQUIRE(j["tests"].size() == 2);
  for (const auto& t : j["tests"]) {
    REQUIRE(t.contains("statistic"));
    REQUIRE(t.contains("value"));
    double p = t["p_value"].get<double>();
    REQUIRE(p > 0.0);
    REQUIRE(p <= 1.0);
    REQUIRE(t["quantiles"].contains("0.90"));
    REQUIRE(t["quantiles"].contains("0.95"));
    REQUIRE(t["quantiles"].contains("0.99"));
    // Critical values widen with the confidence level.
    REQUIRE(t["quantiles"]["0.90"].get<double>() <
            t["quantiles"]["0.99"].get<double>());
  }
  REQUIRE(j["spectrum"].contains("lambdas"));
  REQUIRE(j["spectrum"].contains("variance_explained"));
  REQUIRE(j["spectrum"].contains("q"));
  REQUIRE(j["spectrum"].contains("p"));
  REQUIRE(j["spectrum"].contains("h"));
  REQUIRE(j["manifest"]["parameters"].contains("lag"));

  // The --out file carries the same bytes as stdout.
  REQUIRE(json::parse(slurp(report)) == j);
}

TEST_CASE("cli: manifest records defaults and overrides") {
  std::string stem = write_pair_csv("manifest", 40, 8, 22);
  auto res = run_cli("test " + stem + "_x.csv " + stem +
                     "_y.csv --reps 800 --seed 6");
  REQUIRE(res.exit_code == 0);
  json params = json::parse(res.out)["manifest"]["parameters"];
  REQUIRE(params["reps"]["value"] == 800);
  REQUIRE(params["reps"]["default"] == 10000);
  REQUIRE(params["reps"]["overridden"] == true);
  REQUIRE(params["p"]["value"] == 3);
  REQUIRE(params["p"]["overridden"] == false);
  REQUIRE(params["resolved_h"]["value"].is_number_integer());
}

TEST_CASE("cli: identical flags reproduce the report modulo timestamp") {
  std::string stem = write_pair_csv("repro", 50, 9, 23);
  std::string args =
      "test " + stem + "_x.csv " + stem + "_y.csv --seed 12 --reps 700";
  auto a = run_cli(args);
  auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  REQUIRE(strip_timestamp(json::parse(a.out)) ==
          strip_timestamp(json::parse(b.out)));
}

TEST_CASE("cli: duplicated input rejects the zero surface emphatically") {
  std::string stem = write_pair_csv("dup", 80, 10, 24);
  auto res = run_cli("test " + stem + "_x.csv " + stem +
                     "_x.csv --seed 3 --reps 2000");
  REQUIRE(res.exit_code == 0);
  for (const auto& t : json::parse(res.out)["tests"])
    REQUIRE(t["p_value"].get<double>() <= 0.001);
}

TEST_CASE("cli: changepoint writes a trajectory with zero endpoints") {
  std::string stem = write_pair_csv("cp", 40, 8, 25);
  fs::path traj = scratch_dir() / "cp_traj.csv";
  auto res = run_cli("changepoint " + stem + "_x.csv " + stem +
                     "_y.csv --seed 2 --reps 300 --grid 100 --trajectory " +
                     traj.string());
  REQUIRE(res.exit_code == 0);
  json j = json::parse(res.out);
  REQUIRE(j["report"] == "changepoint");
  for (const auto& t : j["tests"]) {
    int k_hat = t["k_hat"].get<int>();
    REQUIRE(k_hat >= 1);
    REQUIRE(k_hat <= 39);
  }
  // Header row plus T + 1 trajectory rows; column 3 is the norm CUSUM.
  std::ifstream in(traj);
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("k,x,Z,", 0) == 0);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 41);
  auto third_field = [](const std::string& s) {
    auto a = s.find(',');
    auto b = s.find(',', a + 1);
    auto c = s.find(',', b + 1);
    return s.substr(b + 1, c - b - 1);
  };
  REQUIRE(third_field(rows.front()) == "0");
  REQUIRE(third_field(rows.back()) == "0");
}

TEST_CASE("cli: changepoint --segment reports both sub-samples") {
  std::string stem = write_pair_csv("seg", 60, 8, 26);
  fs::path traj = scratch_dir() / "seg_traj.csv";
  auto res = run_cli("changepoint " + stem + "_x.csv " + stem +
                     "_y.csv --seed 2 --reps 200 --grid 80 --segment "
                     "--trajectory " +
                     traj.string());
  REQUIRE(res.exit_code == 0);
  json j = json::parse(res.out);
  REQUIRE(j["segments"].size() == 2);
  int k_hat = j["tests"][0]["k_hat"].get<int>();
  REQUIRE(j["segments"][0]["start_row"] == 1);
  REQUIRE(j["segments"][0]["end_row"] == k_hat);
  REQUIRE(j["segments"][1]["start_row"] == k_hat + 1);
  REQUIRE(j["segments"][1]["end_row"] == 60);
}

TEST_CASE("cli: labels follow the curves into the changepoint report") {
  DgpSpec spec{DgpKind::iid, 0.3, 30, 6, 0, 27};
  auto b = sim_pair(spec);
  std::vector<std::string> labels;
  for (int i = 1; i <= 30; ++i) labels.push_back("day" + std::to_string(i));
  fs::path xp = scratch_dir() / "lab_x.csv";
  fs::path yp = scratch_dir() / "lab_y.csv";
  write_csv_matrix(xp.string(), b.x().values(), &labels);
  write_csv_matrix(yp.string(), b.y().values(), &labels);
  fs::path traj = scratch_dir() / "lab_traj.csv";
  auto res = run_cli("changepoint " + xp.string() + " " + yp.string() +
                     " --labels --seed 1 --reps 200 --grid 80 --stat norm "
                     "--trajectory " +
                     traj.string());
  REQUIRE(res.exit_code == 0);
  json t = json::parse(res.out)["tests"][0];
  int k_hat = t["k_hat"].get<int>();
  REQUIRE(t["k_hat_label"] == "day" + std::to_string(k_hat));
}

TEST_CASE("cli: cidr output round-trips through the csv layer") {
  Grid g(6);
  Eigen::MatrixXd prices(4, 6);
  prices << 100, 101, 102, 101.5, 103, 104,  //
      50, 50.5, 49.8, 50.2, 50.9, 51,        //
      200, 198, 199, 202, 203, 201,          //
      80, 80, 80, 80, 80, 80;
  fs::path pp = scratch_dir() / "prices.csv";
  write_csv_matrix(pp.string(), prices);
  fs::path cp = scratch_dir() / "curves.csv";
  auto res = run_cli("cidr " + pp.string() + " --out " + cp.string());
  REQUIRE(res.exit_code == 0);

  CsvMatrix reread = read_csv_matrix(cp.string(), false);
  FunctionalSeries expected = cidr_transform(FunctionalSeries(g, prices));
  REQUIRE(reread.values.rows() == 4);
  for (int i = 0; i < 4; ++i) {
    REQUIRE(reread.values(i, 0) == 0.0);
    for (int j = 0; j < 6; ++j) {
      // 12-significant-digit formatting: half an ulp of the 12th digit.
      double e = expected.values()(i, j);
      REQUIRE(std::abs(reread.values(i, j) - e) <=
              1e-11 * std::max(1.0, std::abs(e)));
    }
  }
}

TEST_CASE("cli: simulate reruns byte-identically at the same seed") {
  fs::path out_a = scratch_dir() / "sim_a.csv";
  fs::path out_b = scratch_dir() / "sim_b.csv";
  std::string common =
      "simulate --table 1 --kind iid --T 30 --R 8 --q 2 --p 2 --n-sims 6 "
      "--reps 250 --seed 77 --out ";
  auto a = run_cli(common + out_a.string());
  auto b = run_cli(common + out_b.string());
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  std::string csv_a = slurp(out_a), csv_b = slurp(out_b);
  REQUIRE(!csv_a.empty());
  REQUIRE(csv_a == csv_b);
  REQUIRE(csv_a.rfind("statistic,kind,t,alpha,level,rate\n", 0) == 0);
  REQUIRE(fs::exists(out_a.string() + ".manifest.json"));
}

TEST_CASE("cli: test p-values behave like a size test across seeds",
          "[slow]") {
  // Independent X and Y through the full CLI path: the 10% test should
  // reject rarely.
  int rejections = 0;
  const int n_runs = 12;
  for (int s = 0; s < n_runs; ++s) {
    std::string stem = write_pair_csv("size" + std::to_string(s), 80, 10,
                                      derive_seed(5000, 7, s), 0.0);
    auto res = run_cli("test " + stem + "_x.csv " + stem +
                       "_y.csv --seed 1 --reps 999 --stat proj");
    REQUIRE(res.exit_code == 0);
    double p = json::parse(res.out)["tests"][0]["p_value"].get<double>();
    if (p < 0.10) ++rejections;
  }
  REQUIRE(rejections <= 4);
}

TEST_CASE("cli: homogeneous input passes the changepoint scan", "[slow]") {
  int calm = 0;
  const int n_runs = 6;
  for (int s = 0; s < n_runs; ++s) {
    std::string stem = write_pair_csv("calm" + std::to_string(s), 60, 8,
                                      derive_seed(6000, 7, s), 0.5);
    auto res = run_cli("changepoint " + stem + "_x.csv " + stem +
                       "_y.csv --seed 1 --reps 400 --grid 100 --stat norm");
    REQUIRE(res.exit_code == 0);
    double p = json::parse(res.out)["tests"][0]["p_value"].get<double>();
    if (p >= 0.05) ++calm;
  }
  REQUIRE(calm >= 4);
}
