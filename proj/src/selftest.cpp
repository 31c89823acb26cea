#include "eacomm/selftest.hpp"

#include "eacomm/bounds.hpp"
#include "eacomm/facets.hpp"
#include "eacomm/optim.hpp"
#include "eacomm/protocol.hpp"
#include "eacomm/qcore.hpp"

#include <cmath>
#include <sstream>

namespace eacomm::selftest {

namespace {

using qcore::DensityOperator;

CheckResult make(const std::string& name, double metric, double limit,
                 const std::string& detail) {
  return {name, metric <= limit, metric, limit, detail};
}

double max_abs(const MatC& a) { return a.cwiseAbs().maxCoeff(); }

CheckResult check_density_states() {
  auto st = protocol::protocol_states();
  double worst = 0.0;
  for (const auto& tau : st.tau) {
    worst = std::max(worst, max_abs(tau.rho - tau.rho.adjoint()));
    worst = std::max(worst, std::abs(std::real(tau.rho.trace()) - 1.0));
    auto [w, v] = qcore::eig_herm(tau.rho);
    worst = std::max(worst, std::max(0.0, -w.minCoeff()));
    int rank = 0;
    for (int i = 0; i < w.size(); ++i)
      if (w(i) > 1e-9) ++rank;
    if (rank > 2) worst = std::max(worst, 1.0);
  }
  return make("density-invariants", worst, 1e-10,
              "protocol states Hermitian, unit trace, PSD, rank <= 2");
}

CheckResult check_povm_invariants(std::uint64_t seed) {
  auto st = protocol::protocol_states();
  auto meas = protocol::optimal_measurements(st);
  double worst = 0.0;
  const MatC id = MatC::Identity(8, 8);
  for (const auto* s : {&meas.s1, &meas.s2}) {
    worst = std::max(worst, max_abs(s->pos + s->neg + s->zero - id));
    for (const auto* p : {&s->pos, &s->neg, &s->zero})
      worst = std::max(worst, max_abs(*p * *p - *p));
  }
  worst = std::max(worst, max_abs(meas.flag * meas.flag - meas.flag));

  // solver output must also be a POVM: PSD effects summing to identity
  Rng rng(seed, 11);
  std::vector<MatC> ops;
  for (int b = 0; b < 3; ++b)
    ops.push_back(optim::herm<cxd>(optim::gauss_matrix<cxd>(4, 4, rng)));
  auto sol = optim::max_payoff_povm<cxd>(optim::PayoffEnsemble<cxd>(ops), 1e-7);
  MatC sum = MatC::Zero(4, 4);
  for (const auto& e : sol.primal) {
    auto [w, v] = qcore::eig_herm(e);
    worst = std::max(worst, std::max(0.0, -w.minCoeff()));
    sum += e;
  }
  worst = std::max(worst, max_abs(sum - MatC::Identity(4, 4)));
  return make("povm-invariants", worst, 1e-9,
              "eigenspace projectors resolve identity; solver output is a POVM");
}

CheckResult check_cptp(std::uint64_t seed) {
  Rng rng(seed, 23);
  double worst = 0.0;
  for (auto t : {facets::input1_template(), facets::standard_template()}) {
    std::vector<double> theta(size_t(t.angle_count()));
    for (auto& a : theta) a = rng.uniform() * 2.0 * M_PI;
    auto ch = facets::circuit_channel(t, theta);
    MatC acc = MatC::Zero(ch.in_dim, ch.in_dim);
    for (const auto& k : ch.kraus) acc += k.adjoint() * k;
    worst = std::max(worst, max_abs(acc - MatC::Identity(ch.in_dim, ch.in_dim)));
  }
  return make("cptp-kraus-completeness", worst, 1e-12,
              "circuit channels satisfy sum K^dag K = I at random angles");
}

CheckResult check_no_signaling() {
  auto st = protocol::protocol_states();
  auto marginal = [](const DensityOperator& tau) {
    return qcore::partial_trace(tau, {1, 2}).rho;  // Bob's share
  };
  MatC ref = marginal(st.tau[0]);
  double worst = 0.0;
  for (int x = 1; x < 5; ++x)
    worst = std::max(worst, max_abs(marginal(st.tau[x]) - ref));
  return make("no-signaling-marginal", worst, 1e-10,
              "receiver marginal independent of the encoding");
}

CheckResult check_perfect_discrimination() {
  auto st = protocol::protocol_states();
  double worst = 0.0;
  for (int x = 0; x < 4; ++x)
    worst = std::max(
        worst, std::abs(std::real((st.tau[4].rho * st.tau[x].rho).trace())));
  return make("perfect-discrimination", worst, 1e-10,
              "flag state orthogonal to all compression states");
}

CheckResult check_seesaw_monotone(std::uint64_t seed) {
  auto eps = bounds::bundled_deviations();
  double worst = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    Rng rng(seed, 31 + std::uint64_t(rep));
    auto st = bounds::random_bound_state<double>(rng);
    double prev = -1e300;
    for (int sw = 0; sw < 40; ++sw) {
      double val = bounds::almost_qudit_sweep<double>(st, eps.eps, +1);
      worst = std::max(worst, prev - val);
      prev = val;
    }
  }
  return make("seesaw-monotonicity", std::max(worst, 0.0), 1e-9,
              "alternating objective never decreases across sweeps");
}

CheckResult check_povm_dual_gap(std::uint64_t seed) {
  double worst = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    Rng rng(seed, 41 + std::uint64_t(rep));
    int dim = (rep == 2) ? 4 : 2;
    auto rand_state = [&](int d) {
      MatC g = optim::gauss_matrix<cxd>(d, d, rng);
      MatC r = g * g.adjoint();
      return MatC(r / r.trace());
    };
    MatC r0 = 0.5 * rand_state(dim), r1 = 0.5 * rand_state(dim);
    auto sol =
        optim::max_payoff_povm<cxd>(optim::PayoffEnsemble<cxd>({r0, r1}), 1e-9);
    worst = std::max(worst, sol.dual_gap);
    double exact = 0.5 * (1.0 + qcore::trace_norm(r0 - r1));
    worst = std::max(worst, std::abs(sol.value - exact));
  }
  return make("povm-dual-gap", worst, 1e-7,
              "binary discrimination solved to certified gap, matches the "
              "trace-norm value");
}

CheckResult check_constrained_duality(std::uint64_t seed) {
  const MatR pi = bounds::qutrit_projector<double>();
  double worst = 0.0;
  const double eps_list[3] = {0.005, 0.05, 0.2};
  for (int rep = 0; rep < 3; ++rep) {
    Rng rng(seed, 53 + std::uint64_t(rep));
    MatR a = optim::herm<double>(optim::gauss_matrix<double>(4, 4, rng));
    double eps = eps_list[rep];
    auto sol = optim::constrained_state_opt<double>(a, pi, eps);
    auto g = [&](double lam) {
      auto [w, v] = optim::eig_sa<double>(MatR(a + lam * pi));
      return w.maxCoeff() - lam * (1.0 - eps);
    };
    // grid oracle over the dual variable, anchored at the solver multiplier
    double hi = std::max(2.0 * sol.lambda, 1.0);
    double grid_min = g(sol.lambda);
    for (int i = 0; i <= 2000; ++i)
      grid_min = std::min(grid_min, g(hi * double(i) / 2000.0));
    worst = std::max(worst, std::abs(grid_min - sol.value));
  }
  return make("constrained-eigen-duality", worst, 1e-6,
              "primal value meets the dual grid minimum");
}

}  // namespace

std::vector<CheckResult> run(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_density_states());
  out.push_back(check_povm_invariants(seed));
  out.push_back(check_cptp(seed));
  out.push_back(check_no_signaling());
  out.push_back(check_perfect_discrimination());
  out.push_back(check_seesaw_monotone(seed));
  out.push_back(check_povm_dual_gap(seed));
  out.push_back(check_constrained_duality(seed));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace eacomm::selftest
