#include "eacomm/criteria.hpp"

#include "eacomm/bounds.hpp"
#include "eacomm/dataio.hpp"
#include "eacomm/facets.hpp"
#include "eacomm/protocol.hpp"
#include "eacomm/selftest.hpp"
#include "eacomm/stats.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace eacomm::criteria {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

CriterionResult ideal_protocol_value() {
  CriterionResult r{1, "ideal-protocol-value"};
  auto t0 = clock_type::now();
  auto states = protocol::protocol_states();
  auto meas = protocol::optimal_measurements(states);
  auto corr = protocol::simulate_ideal(states, meas);
  double p = protocol::prac(corr, protocol::InputAssignment::identity());
  r.seconds = seconds_since(t0);
  double target = (6.0 + std::sqrt(2.0)) / 8.0;
  double err = std::abs(p - target);
  r.pass = err <= 1e-9 && r.seconds < 1.0;
  r.detail = "P=" + num(p) + " target=" + num(target) + " |err|=" + num(err);
  r.data = {{"value", p}, {"target", target}, {"abs_error", err}};
  return r;
}

CriterionResult measurement_reconstruction() {
  CriterionResult r{2, "measurement-reconstruction"};
  auto t0 = clock_type::now();
  auto states = protocol::protocol_states();
  auto meas = protocol::optimal_measurements(states);
  auto fix = protocol::reference_measurement_fixtures();
  double d1 = (meas.m1 - fix.m1.cast<cxd>()).cwiseAbs().maxCoeff();
  double d2 = (meas.m2 - fix.m2.cast<cxd>()).cwiseAbs().maxCoeff();
  auto [w, v] = qcore::eig_herm(meas.flag);
  int rank = 0;
  for (int i = 0; i < w.size(); ++i)
    if (w(i) > 0.5) ++rank;
  r.seconds = seconds_since(t0);
  double worst = std::max(d1, d2);
  r.pass = worst <= 5e-4 && rank == 2;
  r.detail = "max|M1-ref|=" + num(d1) + " max|M2-ref|=" + num(d2) +
             " flag ranks=(" + std::to_string(rank) + "," +
             std::to_string(8 - rank) + ")";
  r.data = {{"m1_maxdiff", d1},
            {"m2_maxdiff", d2},
            {"flag_rank", rank},
            {"complement_rank", 8 - rank}};
  return r;
}

CriterionResult corrected_bounds(std::uint64_t seed) {
  CriterionResult r{3, "corrected-bounds"};
  auto t0 = clock_type::now();
  optim::SeeSawConfig cfg;
  cfg.tol = 1e-9;
  cfg.max_sweeps = 500;
  cfg.restarts = 100;
  cfg.seed = seed;

  bounds::DeviationVector zero;
  auto clean = bounds::corrected_upper_bound(zero, cfg);
  auto eps = bounds::bundled_deviations();
  auto upper = bounds::corrected_upper_bound(eps, cfg);
  auto lower = bounds::corrected_lower_bound(eps, cfg);
  r.seconds = seconds_since(t0);

  int agree = 0;
  for (double v : upper.restart_values)
    if (v >= upper.value - 1e-4) ++agree;

  bool ok_clean = std::abs(clean.value - 0.9045) <= 1e-3;
  bool ok_upper = std::abs(upper.value - 0.910) <= 2e-3;
  bool ok_lower = std::abs(lower.value - 0.090) <= 2e-3;
  r.pass = ok_clean && ok_upper && ok_lower && agree >= 20 && r.seconds < 180.0;
  r.detail = "clean=" + num(clean.value) + " upper=" + num(upper.value) +
             " lower=" + num(lower.value) + " agree=" + std::to_string(agree) +
             "/100";
  r.data = {{"clean_upper", clean.value},
            {"corrected_upper", upper.value},
            {"corrected_lower", lower.value},
            {"restarts_within_1e-4", agree}};
  return r;
}

CriterionResult data_pipeline() {
  CriterionResult r{4, "data-pipeline"};
  auto t0 = clock_type::now();
  auto table = dataio::measured_correlations();
  auto counts = dataio::counts_from_table(table);
  double phat =
      stats::estimator(counts, protocol::rac_task(),
                       protocol::InputAssignment::identity(),
                       protocol::default_binning());
  auto rates = dataio::discrimination_rates(table);
  auto printed = bounds::bundled_rates();
  double worst_r = 0.0;
  for (int x = 0; x < 5; ++x)
    worst_r = std::max(worst_r, std::abs(rates.r[x] - printed.r[x]));
  auto eps = bounds::bundled_deviations();
  const double target_eps[4] = {0.0054, 0.0049, 0.0056, 0.0050};
  double worst_eps = 0.0;
  for (int x = 0; x < 4; ++x)
    worst_eps = std::max(worst_eps, std::abs(eps.eps[x] - target_eps[x]));
  r.seconds = seconds_since(t0);
  bool ok_phat = std::abs(phat - 0.9167) <= 2e-3;
  bool ok_r5 = std::abs(rates.r[4] - 0.9977) <= 2e-4 + 1e-12;
  r.pass = ok_phat && ok_r5 && worst_r <= 2e-4 + 1e-12 && worst_eps <= 1e-4;
  r.detail = "P_hat=" + num(phat) + " r5=" + num(rates.r[4]) +
             " max|r-printed|=" + num(worst_r) +
             " max|eps-target|=" + num(worst_eps);
  r.data = {{"p_hat", phat},
            {"rates", rates.r},
            {"max_rate_deviation", worst_r},
            {"inflated_eps", eps.eps},
            {"max_eps_deviation", worst_eps}};
  return r;
}

CriterionResult pvalue_formula() {
  CriterionResult r{5, "azuma-pvalue"};
  auto t0 = clock_type::now();
  stats::PValueInputs in;
  in.n = 160000;
  in.mu = 0.0067;
  in.c = 1.0;
  in.t = -0.09;
  double p = stats::azuma_pvalue(in);
  r.seconds = seconds_since(t0);
  double target = 2.9e-8;
  double rel = std::abs(p - target) / target;
  r.pass = rel <= 0.05;
  r.detail = "p=" + num(p) + " target=" + num(target) + " rel_err=" + num(rel);
  r.data = {{"p_value", p}, {"target", target}, {"relative_error", rel}};
  return r;
}

CriterionResult classical_bounds() {
  CriterionResult r{6, "classical-facet-bounds"};
  auto t0 = clock_type::now();
  auto fac = facets::builtin_facets();
  double worst = 0.0;
  std::vector<double> values;
  for (const auto& f : fac) {
    auto sol = facets::classical_bound(f, 4);
    values.push_back(sol.value);
    worst = std::max(worst, std::abs(sol.value - f.cbound));
  }
  r.seconds = seconds_since(t0);
  r.pass = worst <= 1e-9 && r.seconds < 60.0;
  r.detail = "C=(" + num(values[0]) + "," + num(values[1]) + "," +
             num(values[2]) + ") max|err|=" + num(worst);
  r.data = {{"values", values}, {"max_error", worst}};
  return r;
}

CriterionResult quantum_bounds(std::uint64_t seed) {
  CriterionResult r{7, "quantum-facet-bounds"};
  auto t0 = clock_type::now();
  auto fac = facets::builtin_facets();
  optim::SeeSawConfig cfg;
  cfg.tol = 1e-9;
  cfg.max_sweeps = 200;
  cfg.restarts = 100;
  cfg.seed = seed;
  facets::QuantumOptions fixed;  // fixed maximally entangled state
  fixed.povm_iters = 40;
  fixed.stiefel_steps = 40;
  facets::QuantumOptions opt_state = fixed;
  opt_state.optimize_state = true;

  double f2d4 = facets::quantum_lower_bound(fac[1], 4, cfg, fixed).value;
  double f3d4 = facets::quantum_lower_bound(fac[2], 4, cfg, opt_state).value;
  double f3d3 = facets::quantum_lower_bound(fac[2], 3, cfg, opt_state).value;
  double f1d4 = facets::quantum_lower_bound(fac[0], 4, cfg, opt_state).value;
  double d2[3];
  for (int i = 0; i < 3; ++i)
    d2[i] = facets::quantum_lower_bound(fac[i], 2, cfg, opt_state).value;
  r.seconds = seconds_since(t0);

  bool gains = f2d4 >= 3.28 && f3d4 >= 6.29 && f3d3 >= 6.03;
  bool caps = f1d4 <= fac[0].cbound + 1e-6;
  for (int i = 0; i < 3; ++i) caps = caps && d2[i] <= fac[i].cbound + 1e-6;
  r.pass = gains && caps && r.seconds < 480.0;
  r.detail = "f2d4=" + num(f2d4) + " f3d4=" + num(f3d4) + " f3d3=" + num(f3d3) +
             " f1d4=" + num(f1d4) + " d2=(" + num(d2[0]) + "," + num(d2[1]) +
             "," + num(d2[2]) + ")";
  r.data = {{"facet2_d4", f2d4}, {"facet3_d4", f3d4}, {"facet3_d3", f3d3},
            {"facet1_d4", f1d4}, {"facet1_d2", d2[0]}, {"facet2_d2", d2[1]},
            {"facet3_d2", d2[2]}};
  return r;
}

CriterionResult circuit_template(std::uint64_t seed) {
  CriterionResult r{8, "circuit-template"};
  auto t0 = clock_type::now();
  auto fac = facets::builtin_facets();
  optim::SeeSawConfig cfg;
  cfg.tol = 1e-9;
  cfg.max_sweeps = 120;
  cfg.restarts = 24;
  cfg.seed = seed;
  facets::CircuitOptions opt;
  auto main = facets::optimize_circuit(fac[1], cfg, opt);
  optim::SeeSawConfig acfg = cfg;
  acfg.restarts = 12;
  facets::CircuitOptions ablation;
  ablation.product_state = true;
  auto ab = facets::optimize_circuit(fac[1], acfg, ablation);
  r.seconds = seconds_since(t0);
  r.pass = main.value >= 3.20 && ab.value <= 3.0 + 1e-6;
  r.detail = "circuit=" + num(main.value) + " ablation=" + num(ab.value);
  r.data = {{"circuit_value", main.value}, {"ablation_value", ab.value}};
  return r;
}

CriterionResult invariant_suite(std::uint64_t seed) {
  CriterionResult r{9, "invariant-suite"};
  auto t0 = clock_type::now();
  auto checks = selftest::run(seed);
  r.seconds = seconds_since(t0);
  r.pass = selftest::all_passed(checks) && r.seconds < 60.0;
  std::string failed;
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"metric", c.metric},
                   {"limit", c.limit}});
    if (!c.pass) failed += (failed.empty() ? "" : ",") + c.name;
  }
  r.detail = failed.empty()
                 ? std::to_string(checks.size()) + " checks passed"
                 : "failed: " + failed;
  r.data = {{"checks", arr}};
  return r;
}

}  // namespace

CriterionResult run_one(int index, std::uint64_t seed) {
  switch (index) {
    case 1: return ideal_protocol_value();
    case 2: return measurement_reconstruction();
    case 3: return corrected_bounds(seed);
    case 4: return data_pipeline();
    case 5: return pvalue_formula();
    case 6: return classical_bounds();
    case 7: return quantum_bounds(seed);
    case 8: return circuit_template(seed);
    case 9: return invariant_suite(seed);
    default:
      throw ValidationError("criterion index must be 1.." +
                            std::to_string(kCriterionCount));
  }
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.reserve(kCriterionCount);
  for (int i = 1; i <= kCriterionCount; ++i) out.push_back(run_one(i, seed));
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.index << " ("
     << r.name << "): " << r.detail << "  [" << std::fixed
     << std::setprecision(2) << r.seconds << " s]";
  return os.str();
}

}  // namespace eacomm::criteria
