#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bext/functionals.hpp"
#include "bext/solver.hpp"
#include "json.hpp"

namespace bext {

// One sweep grid point. Fields that do not apply (a for Riesz sweeps, q for
// non-solver sweeps) are NaN and serialize as empty CSV cells / JSON nulls.
struct ReportRow {
  int n = 3;
  double r = std::numeric_limits<double>::quiet_NaN();
  double a = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double quotient = 0.0;
  double reference = 0.0;
  double margin = 0.0;
  double error_estimate = 0.0;
  Verdict verdict = Verdict::WithinTolerance;
};

inline ReportRow make_row(int n, double r, double a, double q, const QuotientReport& rep) {
  ReportRow row;
  row.n = n;
  row.r = r;
  row.a = a;
  row.q = q;
  row.quotient = rep.quotient;
  row.reference = rep.reference;
  row.margin = rep.margin();
  row.error_estimate = rep.error_estimate;
  row.verdict = rep.verdict;
  return row;
}

// 17 significant digits: enough for bit-faithful double round trips.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "ExceedsBall") return Verdict::ExceedsBall;
  if (s == "BelowBall") return Verdict::BelowBall;
  if (s == "WithinTolerance") return Verdict::WithinTolerance;
  throw std::invalid_argument("unknown verdict: " + s);
}

inline const char* csv_header() { return "n,r,a,q,quotient,reference,margin,error_estimate,verdict"; }

inline std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << csv_header() << "\n";
  for (const ReportRow& row : rows) {
    out << row.n << ',' << format_real(row.r) << ',' << format_real(row.a) << ',' << format_real(row.q) << ','
        << format_real(row.quotient) << ',' << format_real(row.reference) << ',' << format_real(row.margin) << ','
        << format_real(row.error_estimate) << ',' << to_string(row.verdict) << "\n";
  }
  return out.str();
}

inline std::vector<ReportRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() != 9) throw std::invalid_argument("parse_csv: wrong field count");
    auto real = [](const std::string& s) {
      return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
    };
    ReportRow row;
    row.n = std::stoi(cells[0]);
    row.r = real(cells[1]);
    row.a = real(cells[2]);
    row.q = real(cells[3]);
    row.quotient = real(cells[4]);
    row.reference = real(cells[5]);
    row.margin = real(cells[6]);
    row.error_estimate = real(cells[7]);
    row.verdict = verdict_from_string(cells[8]);
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json row_to_json(const ReportRow& row) {
  auto real = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return nlohmann::json{{"n", row.n},
                        {"r", real(row.r)},
                        {"a", real(row.a)},
                        {"q", real(row.q)},
                        {"quotient", row.quotient},
                        {"reference", row.reference},
                        {"margin", row.margin},
                        {"error_estimate", row.error_estimate},
                        {"verdict", to_string(row.verdict)}};
}

// ---- sweeps -----------------------------------------------------------------

enum class SweepTheorem { AnnulusRiesz, AnnulusPoisson };

struct SweepSpec {
  SweepTheorem theorem = SweepTheorem::AnnulusRiesz;
  std::vector<int> n_list{3};
  std::vector<double> r_grid;           // inner radii, each in (0,1)
  std::vector<double> a_grid{};         // Poisson only: candidate inner values
  std::string output_path;              // CSV; companion JSON derived by caller
  int workers = 0;                      // 0 = hardware concurrency
  QuadOptions quad;

  void validate() const {
    if (n_list.empty()) throw std::invalid_argument("SweepSpec: empty dimension list");
    if (r_grid.empty()) throw std::invalid_argument("SweepSpec: empty radius grid");
    for (double r : r_grid)
      if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("SweepSpec: radii must lie in (0,1)");
    if (theorem == SweepTheorem::AnnulusPoisson && a_grid.size() < 2)
      throw std::invalid_argument("SweepSpec: Poisson sweeps need an a grid");
  }
};

struct SweepSummary {
  int n = 3;
  double r_star = 0.0;        // largest grid r with verdict ExceedsBall
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double slope_reference = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::vector<ReportRow> rows;  // grid order: n-major, then r
  std::vector<SweepSummary> summaries;
};

namespace detail {

// Deterministic worker pool: task i writes slot i, output order is grid order
// regardless of completion order.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  int hw = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  hw = std::min<int>(hw, static_cast<int>(count));
  if (hw <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(hw);
  for (int t = 0; t < hw; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Small-r slope of C_2(A_r)/C_2(B_1) - 1 against r^{n-1}, Richardson-
// extrapolated from the pair {r_hi, r_hi/10}; for n = 3 the pair is
// {1e-2, 1e-3}. Reference value: n/2 - n/(2(n-1)).
inline SweepSummary riesz_slope_summary(int n) {
  SweepSummary s;
  s.n = n;
  const double base = annulus_C2_exact(0.0, n);
  const double r_hi = std::pow(10.0, -4.0 / (n - 1.0));
  auto slope = [&](double r) { return (annulus_C2_exact(r, n) / base - 1.0) / std::pow(r, n - 1.0); };
  s.fitted_slope = (10.0 * slope(r_hi / 10.0) - slope(r_hi)) / 9.0;
  s.slope_reference = 0.5 * n - 0.5 * n / (n - 1.0);
  return s;
}

inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult out;
  out.rows.resize(spec.n_list.size() * spec.r_grid.size());

  detail::parallel_for(out.rows.size(), spec.workers, [&](std::size_t idx) {
    const int n = spec.n_list[idx / spec.r_grid.size()];
    const double r = spec.r_grid[idx % spec.r_grid.size()];
    const DomainSpec dom = DomainSpec::annulus(n, r);
    if (spec.theorem == SweepTheorem::AnnulusRiesz) {
      out.rows[idx] = make_row(n, r, std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::quiet_NaN(), c2_functional(dom, spec.quad));
    } else {
      const double a_lo = spec.a_grid.front();
      const double a_hi = spec.a_grid.back();
      const TwoLevelSearch best = optimize_two_level_a(dom, TwoLevelObjective::PoissonSurrogate, a_lo, a_hi,
                                                       static_cast<int>(spec.a_grid.size()), spec.quad);
      out.rows[idx] = make_row(n, r, best.best_a, std::numeric_limits<double>::quiet_NaN(), best.best_report);
    }
  });

  for (int n : spec.n_list) {
    SweepSummary s;
    if (spec.theorem == SweepTheorem::AnnulusRiesz) {
      s = riesz_slope_summary(n);
    } else {
      s.n = n;
    }
    s.r_star = 0.0;
    for (const ReportRow& row : out.rows)
      if (row.n == n && row.verdict == Verdict::ExceedsBall) s.r_star = std::max(s.r_star, row.r);
    out.summaries.push_back(s);
  }
  return out;
}

inline nlohmann::json sweep_to_json(const SweepSpec& spec, const SweepResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : result.rows) rows.push_back(row_to_json(row));
  nlohmann::json summaries = nlohmann::json::array();
  for (const SweepSummary& s : result.summaries) {
    nlohmann::json j{{"n", s.n}, {"r_star", s.r_star}};
    j["fitted_slope"] = std::isnan(s.fitted_slope) ? nlohmann::json(nullptr) : nlohmann::json(s.fitted_slope);
    j["slope_reference"] =
        std::isnan(s.slope_reference) ? nlohmann::json(nullptr) : nlohmann::json(s.slope_reference);
    summaries.push_back(j);
  }
  return nlohmann::json{
      {"theorem", spec.theorem == SweepTheorem::AnnulusRiesz ? "annulus-riesz" : "annulus-poisson"},
      {"rows", rows},
      {"summaries", summaries}};
}

// ---- solver report serialization ---------------------------------------------

inline nlohmann::json solver_report_to_json(const DomainSpec& dom, const SolverReport& rep) {
  nlohmann::json domain{{"n", dom.n}};
  switch (dom.kind) {
    case DomainKind::Ball: domain["kind"] = "ball"; break;
    case DomainKind::Annulus:
      domain["kind"] = "annulus";
      domain["r"] = dom.r;
      break;
    case DomainKind::HalfSpaceWindow:
      domain["kind"] = "half-space-window";
      domain["R"] = dom.R;
      break;
  }
  nlohmann::json final_f;
  if (rep.final_f.componentwise_constant()) {
    final_f["representation"] = "component-constant";
    final_f["values"] = rep.final_f.component_values();
  } else {
    const SampledSurface s = rep.final_f.as_sampled();
    final_f["representation"] = "sampled";
    final_f["values"] = s.values;
  }
  return nlohmann::json{{"domain", domain},
                        {"q", rep.q},
                        {"converged", rep.converged},
                        {"iterations", rep.iterations},
                        {"residual", rep.residual},
                        {"quotient", rep.quotient},
                        {"quotient_history", rep.quotient_history},
                        {"holder_bound_ok", rep.holder_bound_ok},
                        {"final_f", final_f}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace bext
