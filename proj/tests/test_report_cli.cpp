#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bext/cli.hpp"
#include "bext/report.hpp"
#include "doctest.h"

using namespace bext;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"bext"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string tmp_path(const std::string& name) { return "bext_test_" + name; }

bool same_double(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  if (b == 0.0) return a == 0.0;
  return std::abs(a - b) <= 1e-15 * std::abs(b);
}

}  // namespace

TEST_SUITE_BEGIN("report_cli");

TEST_CASE("csv round trip preserves rows") {
  std::vector<ReportRow> rows;
  ReportRow r1;
  r1.n = 3;
  r1.r = 0.0123456789012345678;
  r1.quotient = 2.4075685925929434;
  r1.reference = 2.3904733198783872;
  r1.margin = r1.quotient - r1.reference;
  r1.error_estimate = 3.2e-13;
  r1.verdict = Verdict::ExceedsBall;
  rows.push_back(r1);
  ReportRow r2;
  r2.n = 4;
  r2.r = 0.05;
  r2.a = 2.2100000000000004;
  r2.quotient = 0.68564366744166220;
  r2.reference = 0.67434007341210485;
  r2.margin = r2.quotient - r2.reference;
  r2.error_estimate = 1e-12;
  r2.verdict = Verdict::WithinTolerance;
  rows.push_back(r2);

  const std::string text = to_csv(rows);
  const std::vector<ReportRow> back = parse_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].n == rows[i].n);
    CHECK(same_double(back[i].r, rows[i].r));
    CHECK(same_double(back[i].a, rows[i].a));
    CHECK(same_double(back[i].q, rows[i].q));
    CHECK(same_double(back[i].quotient, rows[i].quotient));
    CHECK(same_double(back[i].reference, rows[i].reference));
    CHECK(same_double(back[i].margin, rows[i].margin));
    CHECK(same_double(back[i].error_estimate, rows[i].error_estimate));
    CHECK(back[i].verdict == rows[i].verdict);
  }
  CHECK_THROWS_AS(parse_csv("bogus\n1,2,3"), std::invalid_argument);
}

TEST_CASE("riesz sweep: ordered rows, positive margins, slope summary") {
  SweepSpec spec;
  spec.theorem = SweepTheorem::AnnulusRiesz;
  spec.r_grid = {0.01, 0.05, 0.1, 0.2, 0.3};
  spec.output_path = "";
  const SweepResult res = run_sweep(spec);
  REQUIRE(res.rows.size() == spec.r_grid.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(res.rows[i].r == doctest::Approx(spec.r_grid[i]));
    CHECK(res.rows[i].margin > 0.0);
    CHECK(res.rows[i].verdict == Verdict::ExceedsBall);
    CHECK(std::abs(res.rows[i].quotient / annulus_C2_exact(spec.r_grid[i], 3) - 1.0) <= 1e-8);
  }
  REQUIRE(res.summaries.size() == 1);
  CHECK(res.summaries[0].r_star == doctest::Approx(0.3));
  CHECK(std::abs(res.summaries[0].fitted_slope / 0.75 - 1.0) <= 1e-2);
  CHECK(res.summaries[0].slope_reference == doctest::Approx(0.75));
}

TEST_CASE("sweep validation rejects bad grids before writing") {
  SweepSpec spec;
  spec.r_grid = {};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.r_grid = {1.2};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("worker pool does not change results or ordering") {
  SweepSpec a;
  a.theorem = SweepTheorem::AnnulusRiesz;
  a.r_grid = {0.01, 0.03, 0.1, 0.25};
  a.workers = 1;
  SweepSpec b = a;
  b.workers = 2;
  const std::string csv_a = to_csv(run_sweep(a).rows);
  const std::string csv_b = to_csv(run_sweep(b).rows);
  CHECK(csv_a == csv_b);
}

TEST_CASE("cli: verify suites exit 0, unknown suite exits 2") {
  CHECK(run_cli({"verify", "single-layer", "--n", "3..4"}) == 0);
  CHECK(run_cli({"verify", "duality"}) == 0);
  CHECK(run_cli({"verify", "nonsense"}) == 2);
  CHECK(run_cli({"verify", "single-layer", "--n", "17"}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
}

TEST_CASE("cli: sweep writes deterministic files and honors exit codes") {
  const std::string out1 = tmp_path("sweep1.csv");
  const std::string out2 = tmp_path("sweep2.csv");
  const std::string json = tmp_path("sweep.json");
  const std::vector<std::string> base{"sweep",    "annulus-riesz", "--r-min", "0.01",  "--r-max", "0.2",
                                      "--r-count", "5",            "--json",  json};
  std::vector<std::string> a1 = base;
  a1.insert(a1.end(), {"--out", out1, "--workers", "1"});
  std::vector<std::string> a2 = base;
  a2.insert(a2.end(), {"--out", out2, "--workers", "2"});
  CHECK(run_cli(a1) == 0);
  CHECK(run_cli(a2) == 0);
  CHECK(slurp(out1) == slurp(out2));

  const std::vector<ReportRow> rows = parse_csv(slurp(out1));
  CHECK(rows.size() == 5);
  const nlohmann::json j = nlohmann::json::parse(slurp(json));
  CHECK(j["rows"].size() == 5);
  CHECK(j["summaries"][0]["n"] == 3);

  // empty grid -> exit 2, no file written
  const std::string nofile = tmp_path("sweep_none.csv");
  std::remove(nofile.c_str());
  CHECK(run_cli({"sweep", "annulus-riesz", "--r-count", "0", "--out", nofile}) == 2);
  std::ifstream probe(nofile);
  CHECK_FALSE(probe.good());

  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(json.c_str());
}

TEST_CASE("cli: poisson sweep finds the optimized margin") {
  const std::string out = tmp_path("poisson.csv");
  CHECK(run_cli({"sweep", "annulus-poisson", "--r", "0.05", "--out", out}) == 0);
  const std::vector<ReportRow> rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].verdict == Verdict::ExceedsBall);
  CHECK(rows[0].a == doctest::Approx(2.21).epsilon(0.02));
  CHECK(rows[0].quotient == doctest::Approx(0.68564366744166220).epsilon(1e-6));
  std::remove(out.c_str());
}

TEST_CASE("cli: solve reports and exit codes") {
  const std::string out = tmp_path("solve.json");
  CHECK(run_cli({"solve", "--domain", "ball", "--n", "3", "--q", "3", "--out", out}) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["converged"] == true);
  CHECK(j["domain"]["kind"] == "ball");
  CHECK(j["quotient_history"].size() >= 1);
  CHECK(std::abs(j["quotient"].get<double>() - 3.0350464054984608) <= 1e-9);

  // invalid radius -> exit 2
  CHECK(run_cli({"solve", "--domain", "annulus", "--n", "3", "--r", "1.5", "--q", "3"}) == 2);
  // missing required flag -> exit 2
  CHECK(run_cli({"solve", "--domain", "ball"}) == 2);

  // non-convergence -> exit 3, report still written
  const std::string out2 = tmp_path("solve_nc.json");
  CHECK(run_cli({"solve", "--domain", "annulus", "--n", "3", "--r", "0.05", "--q", "5.9", "--max-iter", "1",
                 "--out", out2}) == 3);
  nlohmann::json j2 = nlohmann::json::parse(slurp(out2));
  CHECK(j2["converged"] == false);
  std::remove(out.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("cli: help exits 0") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"solve", "--help"}) == 0);
}

TEST_CASE("verify table reports failures with exit code 1") {
  std::vector<cli::CheckRow> rows{cli::check_rel("ok", 1.0, 1.0, 1e-12),
                                  cli::check_rel("bad", 1.1, 1.0, 1e-12)};
  CHECK(cli::print_table(rows) == 1);
  rows.pop_back();
  CHECK(cli::print_table(rows) == 0);
}

TEST_CASE("cli: key=value config file overrides defaults") {
  const std::string cfg = tmp_path("config.ini");
  const std::string out = tmp_path("config_solve.json");
  std::ofstream(cfg) << "[solve]\nq=3\ndomain=ball\nout=" << out << "\n";
  CHECK(run_cli({"--config", cfg, "solve"}) == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["q"].get<double>() == doctest::Approx(3.0));
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_SUITE_END();
