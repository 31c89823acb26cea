// eacomm CLI: reproduction, data analysis, corrected bounds, p-values, facet
// optimization, and the invariant self-test.  Human summary on stdout; full-
// precision JSON reports through --out.  Exit codes: 0 success, 1 usage,
// 2 data validation, 3 optimizer non-convergence.

#include "eacomm/bounds.hpp"
#include "eacomm/criteria.hpp"
#include "eacomm/dataio.hpp"
#include "eacomm/facets.hpp"
#include "eacomm/protocol.hpp"
#include "eacomm/selftest.hpp"
#include "eacomm/stats.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace eacomm;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// --out foo or foo.json -> (foo.json, foo.delta.csv)
std::pair<std::string, std::string> out_paths(const std::string& out) {
  std::string base = out;
  if (base.size() > 5 && base.substr(base.size() - 5) == ".json")
    base = base.substr(0, base.size() - 5);
  return {base + ".json", base + ".delta.csv"};
}

void write_report(const dataio::ReportBundle& bundle, const std::string& out) {
  if (out.empty()) return;
  auto [jpath, cpath] = out_paths(out);
  dataio::emit_report(bundle, jpath, cpath);
  std::cout << "report written to " << jpath << "\n";
}

json conventions_record() {
  return {{"operator_products", "right-to-left"},
          {"encoding_bit_map", "lexicographic (first encoding -> (0,0))"},
          {"effective_subsystems", "(A2,B1,B2)"},
          {"zero_eigenspace_policy", "counts as failure"},
          {"outcome_sign", "b=0 is the positive eigenspace / non-flag class"},
          {"counts_assumption", "table cells treated as probabilities with "
                                "2e4 rounds per cell when counts are needed"}};
}

struct CommonOpts {
  std::uint64_t seed = 0;
  int restarts = 100;
  double tol = 1e-9;
  double k = 5.0;
  std::string field = "real";
  std::string out;
};

json summary_json(const bounds::BoundSummary& s) {
  return {{"value", s.value},
          {"sweeps_used", s.sweeps_used},
          {"converged", s.converged},
          {"best_restart", s.restart},
          {"restart_values", s.restart_values},
          {"field", bounds::to_string(s.field)}};
}

json rates_json(const bounds::DiscriminationRates& r) {
  return {{"r", r.r}, {"sigma", r.sigma}};
}

json deviations_json(const bounds::DeviationVector& d) {
  return {{"eps", d.eps},
          {"inflated", d.inflated},
          {"k", d.k},
          {"clamped_negative", d.clamped_negative}};
}

// --- subcommand bodies ------------------------------------------------------

int run_reproduce(const CommonOpts& o, int criterion) {
  std::vector<criteria::CriterionResult> results;
  if (criterion > 0)
    results.push_back(criteria::run_one(criterion, o.seed));
  else
    results = criteria::run_all(o.seed);

  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    std::cout << criteria::format_line(r) << "\n";
    all = all && r.pass;
    arr.push_back({{"index", r.index},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"seconds", r.seconds},
                   {"data", r.data}});
  }
  auto ref = protocol::reference_bounds();
  dataio::ReportBundle bundle;
  bundle.config = {{"command", "reproduce"},
                   {"seed", o.seed},
                   {"criterion", criterion}};
  bundle.results = {{"criteria", arr},
                    {"reference_bounds",
                     {{"no_entanglement", ref.no_entanglement},
                      {"dense_coding", ref.dense_coding},
                      {"qubit_entanglement", ref.qubit_entanglement},
                      {"four_dim_entanglement", ref.four_dim_entanglement}}}};
  bundle.conventions = conventions_record();
  write_report(bundle, o.out);
  std::cout << (all ? "all criteria passed" : "CRITERIA FAILED") << "\n";
  return all ? 0 : 3;
}

int run_analyze(const CommonOpts& o, const std::string& table_path,
                int n_boot) {
  auto table = table_path.empty() ? dataio::measured_correlations()
                                  : dataio::parse_table(table_path);
  auto counts = dataio::counts_from_table(table);
  auto task = protocol::rac_task();
  auto binning = protocol::default_binning();
  auto assignment = protocol::InputAssignment::identity();
  double phat = stats::estimator(counts, task, assignment, binning);

  auto rates = dataio::discrimination_rates(table);
  for (int x = 0; x < 5; ++x) {
    auto rate_of = [x, &binning](const stats::CountsTable& c) {
      double flag = 0.0, total = 0.0;
      for (int fk : binning.flag) flag += double(c.counts[2][x][fk]);
      for (int kk = 0; kk < 8; ++kk) total += double(c.counts[2][x][kk]);
      if (total <= 0.0) throw ValidationError("bootstrap: empty flag row");
      return x < 4 ? 1.0 - flag / total : flag / total;
    };
    rates.sigma[size_t(x)] =
        stats::poisson_bootstrap(counts, rate_of, n_boot, o.seed + 7000 + x)
            .sigma;
  }
  auto raw = bounds::deviations_from_rates(rates);
  std::array<double, 4> sx = {rates.sigma[0], rates.sigma[1], rates.sigma[2],
                              rates.sigma[3]};
  auto infl = bounds::inflate(raw, sx, rates.sigma[4], o.k);

  optim::SeeSawConfig cfg;
  cfg.tol = o.tol;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  auto field = bounds::field_from_string(o.field);
  auto upper = bounds::corrected_upper_bound(infl, cfg, field);
  auto lower = bounds::corrected_lower_bound(infl, cfg, field);

  double mu = phat - upper.value;
  stats::PValueInputs pin;
  pin.n = counts.scored_total();
  pin.mu = mu;
  pin.c = task.score_ratio_max();
  pin.t = upper.value - 1.0;
  double pval = mu > 0.0 ? stats::azuma_pvalue(pin) : 1.0;
  bool exceeds = mu > 0.0;

  std::cout << "P_hat = " << fmt(phat) << "\n"
            << "rates r = (" << fmt(rates.r[0]) << ", " << fmt(rates.r[1])
            << ", " << fmt(rates.r[2]) << ", " << fmt(rates.r[3]) << ", "
            << fmt(rates.r[4]) << ")\n"
            << "inflated eps (k=" << o.k << ") = (" << fmt(infl.eps[0]) << ", "
            << fmt(infl.eps[1]) << ", " << fmt(infl.eps[2]) << ", "
            << fmt(infl.eps[3]) << ")\n"
            << "corrected upper bound = " << fmt(upper.value) << "\n"
            << "corrected lower bound = " << fmt(lower.value) << "\n"
            << "mu = " << fmt(mu) << ", p-value <= " << fmt(pval) << "\n"
            << "exceeds corrected qubit-entanglement bound: "
            << (exceeds ? "yes" : "no") << "\n";

  dataio::ReportBundle bundle;
  bundle.config = {{"command", "analyze"},
                   {"table", table_path.empty() ? "<bundled>" : table_path},
                   {"seed", o.seed},
                   {"restarts", o.restarts},
                   {"tol", o.tol},
                   {"k", o.k},
                   {"field", o.field},
                   {"bootstrap_resamples", n_boot}};
  bundle.results = {{"p_hat", phat},
                    {"rates", rates_json(rates)},
                    {"deviations_raw", deviations_json(raw)},
                    {"deviations_inflated", deviations_json(infl)},
                    {"corrected_upper", summary_json(upper)},
                    {"corrected_lower", summary_json(lower)},
                    {"mu", mu},
                    {"p_value",
                     {{"n", pin.n}, {"c", pin.c}, {"t", pin.t}, {"p", pval}}},
                    {"verdict_exceeds_corrected_bound", exceeds}};
  bundle.conventions = conventions_record();
  bundle.deltas = dataio::outcome_deltas(table, binning);
  write_report(bundle, o.out);
  return 0;
}

int run_bound(const CommonOpts& o, const std::string& rates_path,
              const std::string& side) {
  auto rates = rates_path.empty() ? bounds::bundled_rates()
                                  : bounds::parse_rates(read_file(rates_path));
  auto raw = bounds::deviations_from_rates(rates);
  std::array<double, 4> sx = {rates.sigma[0], rates.sigma[1], rates.sigma[2],
                              rates.sigma[3]};
  auto eps = bounds::inflate(raw, sx, rates.sigma[4], o.k);

  optim::SeeSawConfig cfg;
  cfg.tol = o.tol;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  auto field = bounds::field_from_string(o.field);

  std::cout << "eps = (" << fmt(eps.eps[0]) << ", " << fmt(eps.eps[1]) << ", "
            << fmt(eps.eps[2]) << ", " << fmt(eps.eps[3]) << ")  k=" << o.k
            << "\n";
  json results = {{"deviations_raw", deviations_json(raw)},
                  {"deviations_inflated", deviations_json(eps)}};
  if (side == "upper" || side == "both") {
    auto upper = bounds::corrected_upper_bound(eps, cfg, field);
    std::cout << "corrected upper bound = " << fmt(upper.value) << "  ("
              << upper.sweeps_used << " sweeps, best restart "
              << upper.restart << ")\n";
    results["corrected_upper"] = summary_json(upper);
  }
  if (side == "lower" || side == "both") {
    auto lower = bounds::corrected_lower_bound(eps, cfg, field);
    std::cout << "corrected lower bound = " << fmt(lower.value) << "\n";
    results["corrected_lower"] = summary_json(lower);
  }

  dataio::ReportBundle bundle;
  bundle.config = {{"command", "bound"},
                   {"rates", rates_path.empty() ? "<bundled>" : rates_path},
                   {"seed", o.seed},
                   {"restarts", o.restarts},
                   {"tol", o.tol},
                   {"k", o.k},
                   {"field", o.field},
                   {"side", side}};
  bundle.results = std::move(results);
  bundle.conventions = conventions_record();
  write_report(bundle, o.out);
  return 0;
}

int run_pvalue(const CommonOpts& o, const stats::PValueInputs& in) {
  double expo = stats::azuma_exponent(in);
  double p = stats::azuma_pvalue(in);
  std::cout << "exponent = " << fmt(expo) << "\n"
            << "p-value <= " << fmt(p) << "\n";
  dataio::ReportBundle bundle;
  bundle.config = {{"command", "pvalue"},
                   {"n", in.n},
                   {"mu", in.mu},
                   {"c", in.c},
                   {"t", in.t}};
  bundle.results = {{"exponent", expo}, {"p_value", p}};
  write_report(bundle, o.out);
  return 0;
}

facets::FacetInequality select_facet(int index, const std::string& file) {
  if (!file.empty()) return facets::parse_facet(read_file(file));
  if (index < 1 || index > 3)
    throw ValidationError("--facet must be 1, 2 or 3 (or use --file)");
  return facets::builtin_facets()[size_t(index - 1)];
}

int run_facet_classical(const CommonOpts& o, int index,
                        const std::string& file, int message_dim,
                        bool serial) {
  auto f = select_facet(index, file);
  auto sol = serial ? facets::classical_bound_serial(f, message_dim)
                    : facets::classical_bound(f, message_dim);
  std::cout << "facet " << f.label << ": classical bound = " << fmt(sol.value)
            << " (known C = " << fmt(f.cbound) << ")\n";
  dataio::ReportBundle bundle;
  bundle.config = {{"command", "facet classical"},
                   {"facet", f.label},
                   {"message_dim", message_dim},
                   {"serial", serial}};
  bundle.results = {{"value", sol.value},
                    {"known_bound", f.cbound},
                    {"encoding", sol.encoding},
                    {"decoding", sol.decoding}};
  write_report(bundle, o.out);
  return 0;
}

int run_facet_quantum(const CommonOpts& o, int index, const std::string& file,
                      int ent_dim, const facets::QuantumOptions& qopt) {
  auto f = select_facet(index, file);
  optim::SeeSawConfig cfg;
  cfg.tol = o.tol;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.max_sweeps = 200;
  auto sol = facets::quantum_lower_bound(f, ent_dim, cfg, qopt);
  std::cout << "facet " << f.label << ": quantum value >= " << fmt(sol.value)
            << " at entanglement dim " << ent_dim << " (classical C = "
            << fmt(f.cbound) << ", measurement-step gap "
            << fmt(sol.dual_gap) << ")\n";
  dataio::ReportBundle bundle;
  bundle.config = {{"command", "facet quantum"},
                   {"facet", f.label},
                   {"ent_dim", ent_dim},
                   {"seed", o.seed},
                   {"restarts", o.restarts},
                   {"tol", o.tol},
                   {"optimize_state", qopt.optimize_state},
                   {"povm_iters", qopt.povm_iters},
                   {"stiefel_steps", qopt.stiefel_steps}};
  bundle.results = {{"value", sol.value},
                    {"known_classical_bound", f.cbound},
                    {"measurement_dual_gap", sol.dual_gap},
                    {"sweeps_used", sol.sweeps_used},
                    {"converged", sol.converged},
                    {"best_restart", sol.restart},
                    {"restart_values", sol.restart_values}};
  write_report(bundle, o.out);
  return 0;
}

int run_facet_circuit(const CommonOpts& o, int index, const std::string& file,
                      const facets::CircuitOptions& copt,
                      const std::string& angles_path,
                      const std::string& angles_out) {
  auto f = select_facet(index, file);
  dataio::ReportBundle bundle;
  bundle.conventions = conventions_record();
  if (!angles_path.empty()) {
    auto deg = angles_path == "bundled"
                   ? facets::reference_angles_deg()
                   : facets::parse_angles_csv(read_file(angles_path));
    auto eval = facets::evaluate_reference_angles(f, deg);
    std::cout << "fixed-angle evaluation: value = " << fmt(eval.value)
              << " (best of " << eval.orderings_tried
              << " control patterns, measurement gap <= " << fmt(eval.gap)
              << ")\n";
    bundle.config = {{"command", "facet circuit"},
                     {"facet", f.label},
                     {"angles", angles_path}};
    bundle.results = {{"value", eval.value},
                      {"measurement_gap", eval.gap},
                      {"ordering", eval.ordering},
                      {"orderings_tried", eval.orderings_tried}};
    write_report(bundle, o.out);
    return 0;
  }
  optim::SeeSawConfig cfg;
  cfg.tol = o.tol;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.max_sweeps = 120;
  auto sol = facets::optimize_circuit(f, cfg, copt);
  std::cout << "facet " << f.label << ": circuit value = " << fmt(sol.value)
            << (copt.product_state ? " (product-state ablation)" : "")
            << " [ordering " << sol.ordering << ", best restart "
            << sol.restart << "]\n";
  std::array<std::vector<double>, 6> deg;
  for (int i = 0; i < 6; ++i) {
    deg[size_t(i)] = sol.angles[size_t(i)];
    for (auto& a : deg[size_t(i)]) a *= 180.0 / M_PI;
  }
  if (!angles_out.empty()) {
    std::ofstream out(angles_out, std::ios::binary);
    if (!out) throw ValidationError("cannot write angles: " + angles_out);
    out << facets::angles_to_csv(deg);
    std::cout << "angles written to " << angles_out << "\n";
  }
  json deg_json = json::array();
  for (const auto& row : deg) deg_json.push_back(row);
  bundle.config = {{"command", "facet circuit"},
                   {"facet", f.label},
                   {"seed", o.seed},
                   {"restarts", o.restarts},
                   {"tol", o.tol},
                   {"product_state", copt.product_state},
                   {"scan_orderings", copt.scan_orderings},
                   {"povm_iters", copt.povm_iters}};
  bundle.results = {{"value", sol.value},
                    {"angles_deg", deg_json},
                    {"ordering", sol.ordering},
                    {"sweeps_used", sol.sweeps_used},
                    {"converged", sol.converged},
                    {"best_restart", sol.restart},
                    {"restart_values", sol.restart_values}};
  write_report(bundle, o.out);
  return 0;
}

int run_selftest(const CommonOpts& o) {
  auto checks = selftest::run(o.seed);
  json arr = json::array();
  for (const auto& c : checks) {
    std::cout << "[" << (c.pass ? " ok " : "FAIL") << "] " << c.name
              << ": metric " << fmt(c.metric) << " <= " << fmt(c.limit)
              << "  (" << c.detail << ")\n";
    arr.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"metric", c.metric},
                   {"limit", c.limit},
                   {"detail", c.detail}});
  }
  bool ok = selftest::all_passed(checks);
  std::cout << (ok ? "selftest passed" : "SELFTEST FAILED") << "\n";
  dataio::ReportBundle bundle;
  bundle.config = {{"command", "selftest"}, {"seed", o.seed}};
  bundle.results = {{"checks", arr}, {"passed", ok}};
  write_report(bundle, o.out);
  return ok ? 0 : 2;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_field_k = true) {
  cmd->add_option("--seed", o.seed, "RNG seed for all stochastic steps");
  cmd->add_option("--restarts", o.restarts, "see-saw restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "see-saw convergence tolerance")
      ->check(CLI::PositiveNumber);
  if (with_field_k) {
    cmd->add_option("--field", o.field, "scalar field: real or complex")
        ->check(CLI::IsMember({"real", "complex"}));
    cmd->add_option("--k", o.k, "sigma inflation multiplier")
        ->check(CLI::NonNegativeNumber);
  }
  cmd->add_option("--out", o.out, "report output path (JSON [+ delta CSV])");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eacomm: entanglement-assisted qubit communication -- reproduction, "
      "analysis and certification toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  int criterion = 0;
  std::string table_path, rates_path, facet_file, side = "both";
  std::string angles_path, angles_out;
  int facet_index = 2, message_dim = 4, ent_dim = 4, n_boot = 200;
  bool serial = false;
  facets::QuantumOptions qopt;
  facets::CircuitOptions copt;
  stats::PValueInputs pin;
  pin.n = 160000;
  pin.mu = 0.0067;
  pin.c = 1.0;
  pin.t = -0.09;

  auto* reproduce = app.add_subcommand(
      "reproduce", "run the pinned reproduction gate (one line per criterion)");
  add_common(reproduce, o, false);
  reproduce->add_option("--criterion", criterion,
                        "run a single criterion (1-9) instead of all")
      ->check(CLI::Range(1, 9));

  auto* analyze = app.add_subcommand(
      "analyze", "full pipeline on a correlation table (bundled by default)");
  add_common(analyze, o);
  analyze->add_option("table", table_path, "table file (CSV or JSON)");
  analyze->add_option("--bootstrap", n_boot, "bootstrap resamples for sigma")
      ->check(CLI::Range(2, 1000000));

  auto* bound = app.add_subcommand(
      "bound", "corrected success bounds from discrimination rates");
  add_common(bound, o);
  bound->add_option("--rates", rates_path, "rates JSON {\"r\":[5],\"sigma\":[5]}");
  bound->add_option("--side", side, "upper, lower or both")
      ->check(CLI::IsMember({"upper", "lower", "both"}));

  auto* pvalue = app.add_subcommand("pvalue", "concentration-bound p-value");
  pvalue->add_option("--n", pin.n, "number of rounds")
      ->check(CLI::PositiveNumber);
  pvalue->add_option("--mu", pin.mu, "observed violation");
  pvalue->add_option("--c", pin.c, "max score-to-prior ratio");
  pvalue->add_option("--t", pin.t, "lower-bound constant");
  pvalue->add_option("--out", o.out, "report output path");

  auto* facet = app.add_subcommand("facet", "facet-inequality bounds");
  facet->require_subcommand(1);
  auto* fc = facet->add_subcommand("classical",
                                   "exhaustive deterministic-strategy bound");
  fc->add_option("--facet", facet_index, "builtin facet index (1-3)")
      ->check(CLI::Range(1, 3));
  fc->add_option("--file", facet_file, "custom facet JSON");
  fc->add_option("--d", message_dim, "message dimension")
      ->check(CLI::Range(1, 6));
  fc->add_flag("--serial", serial, "use the serial reference kernel");
  fc->add_option("--out", o.out, "report output path");

  auto* fq = facet->add_subcommand("quantum",
                                   "entanglement-assisted see-saw lower bound");
  add_common(fq, o, false);
  fq->add_option("--facet", facet_index, "builtin facet index (1-3)")
      ->check(CLI::Range(1, 3));
  fq->add_option("--file", facet_file, "custom facet JSON");
  fq->add_option("--d", ent_dim, "shared entanglement dimension")
      ->check(CLI::Range(2, 5));
  fq->add_flag("--optimize-state", qopt.optimize_state,
               "include the shared-state eigenvector step");
  fq->add_option("--povm-iters", qopt.povm_iters,
                 "fixed-point iterations per measurement step")
      ->check(CLI::PositiveNumber);
  fq->add_option("--stiefel-steps", qopt.stiefel_steps,
                 "ascent steps per channel step")
      ->check(CLI::PositiveNumber);

  auto* fcir = facet->add_subcommand("circuit",
                                     "rotation/CNOT circuit-template bound");
  add_common(fcir, o, false);
  fcir->add_option("--facet", facet_index, "builtin facet index (1-3)")
      ->check(CLI::Range(1, 3));
  fcir->add_option("--file", facet_file, "custom facet JSON");
  fcir->add_flag("--product-state", copt.product_state,
                 "ablation: replace the entangled pairs with |0000>");
  fcir->add_flag("--scan-orderings", copt.scan_orderings,
                 "optimize over every CNOT control pattern");
  fcir->add_option("--povm-iters", copt.povm_iters,
                   "fixed-point iterations per measurement step")
      ->check(CLI::PositiveNumber);
  fcir->add_option("--angles", angles_path,
                   "evaluate fixed angles from CSV ('bundled' for the "
                   "reference table) instead of optimizing");
  fcir->add_option("--emit-angles", angles_out,
                   "write the optimized angle table (degrees) as CSV");

  auto* selftest_cmd =
      app.add_subcommand("selftest", "fast invariant suite (standalone)");
  selftest_cmd->add_option("--seed", o.seed, "RNG seed");
  selftest_cmd->add_option("--out", o.out, "report output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*reproduce) return run_reproduce(o, criterion);
    if (*analyze) return run_analyze(o, table_path, n_boot);
    if (*bound) return run_bound(o, rates_path, side);
    if (*pvalue) return run_pvalue(o, pin);
    if (*fc)
      return run_facet_classical(o, facet_index, facet_file, message_dim,
                                 serial);
    if (*fq) return run_facet_quantum(o, facet_index, facet_file, ent_dim, qopt);
    if (*fcir)
      return run_facet_circuit(o, facet_index, facet_file, copt, angles_path,
                               angles_out);
    if (*selftest_cmd) return run_selftest(o);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
