#include "eacomm/optim.hpp"

#include "eacomm/qcore.hpp"

#include <doctest.h>

#include <cmath>

using namespace eacomm;
using namespace eacomm::optim;

namespace {

MatC random_herm(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return herm<cxd>(gauss_matrix<cxd>(dim, dim, rng));
}

MatC random_density(int dim, std::uint64_t seed) {
  Rng rng(seed);
  MatC g = gauss_matrix<cxd>(dim, dim, rng);
  MatC r = g * g.adjoint();
  return MatC(r / r.trace());
}

}  // namespace

TEST_CASE("spectral helpers") {
  MatC a = random_herm(5, 1);
  auto [w, v] = eig_sa<cxd>(a);
  CHECK((v * w.asDiagonal() * v.adjoint() - a).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(std::abs(spectral_norm<cxd>(a) - w.cwiseAbs().maxCoeff()) < 1e-12);

  MatC p = psd_clip<cxd>(a);
  auto [wp, vp] = eig_sa<cxd>(p);
  CHECK(wp.minCoeff() > -1e-12);

  MatC s = random_density(4, 2);
  MatC is = inv_sqrt_psd<cxd>(s);
  CHECK((is * s * is - MatC::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("random_isometry is an isometry, deterministic in the seed") {
  Rng r1(9), r2(9);
  MatC v1 = random_isometry<cxd>(6, 3, r1);
  MatC v2 = random_isometry<cxd>(6, 3, r2);
  CHECK((v1 - v2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((v1.adjoint() * v1 - MatC::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
  MatR w = random_isometry<double>(4, 4, r1).real();
  CHECK((w.transpose() * w - MatR::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("payoff ensemble validation") {
  CHECK_THROWS_AS(PayoffEnsemble<cxd>({}), ValidationError);
  MatC nh = MatC::Zero(2, 2);
  nh(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(PayoffEnsemble<cxd>({nh}), ValidationError);
  CHECK_THROWS_AS(
      PayoffEnsemble<cxd>({MatC::Identity(2, 2), MatC::Identity(3, 3)}),
      ValidationError);
}

TEST_CASE("max_payoff_povm solves binary discrimination to the trace norm") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    MatC r0 = 0.5 * random_density(3, seed);
    MatC r1 = 0.5 * random_density(3, seed + 100);
    auto sol = max_payoff_povm<cxd>(PayoffEnsemble<cxd>({r0, r1}), 1e-9);
    CHECK(sol.converged);
    CHECK(sol.dual_gap <= 1e-9);
    double exact = 0.5 * (1.0 + qcore::trace_norm(r0 - r1));
    CHECK(std::abs(sol.value - exact) < 1e-7);
  }
}

TEST_CASE("max_payoff_povm: diagonal ensembles have an exact oracle") {
  VecR d0(4), d1(4), d2(4);
  d0 << 0.9, 0.1, 0.4, 0.0;
  d1 << 0.2, 0.8, 0.3, 0.1;
  d2 << 0.1, 0.3, 0.9, 0.7;
  auto diag = [](const VecR& d) { return MatC(d.cast<cxd>().asDiagonal()); };
  auto sol =
      max_payoff_povm<cxd>(PayoffEnsemble<cxd>({diag(d0), diag(d1), diag(d2)}),
                           1e-9);
  double oracle = 0.0;
  for (int i = 0; i < 4; ++i)
    oracle += std::max({d0(i), d1(i), d2(i)});
  CHECK(std::abs(sol.value - oracle) < 1e-7);
}

TEST_CASE("max_payoff_povm shift covariance") {
  MatC r0 = 0.5 * random_density(3, 21);
  MatC r1 = 0.5 * random_density(3, 22);
  auto base = max_payoff_povm<cxd>(PayoffEnsemble<cxd>({r0, r1}), 1e-9);
  double c = 0.37;
  MatC shift = c * MatC::Identity(3, 3);
  auto moved = max_payoff_povm<cxd>(
      PayoffEnsemble<cxd>({MatC(r0 + shift), MatC(r1 + shift)}), 1e-9);
  // sum_b Tr(M_b (R_b + cI)) = value + c * dim
  CHECK(std::abs(moved.value - base.value - c * 3.0) < 1e-6);
}

TEST_CASE("povm_sweep never worsens the measurement") {
  Rng rng(31);
  std::vector<MatC> ops;
  for (int b = 0; b < 4; ++b)
    ops.push_back(herm<cxd>(gauss_matrix<cxd>(5, 5, rng)));
  PayoffEnsemble<cxd> ens(ops);
  std::vector<MatC> m(4, MatC(MatC::Identity(5, 5) / 4.0));
  double before = 0.0;
  for (int b = 0; b < 4; ++b)
    before += std::real(cxd((ens.payoff[size_t(b)] * m[size_t(b)]).trace()));
  double after = povm_sweep<cxd>(ens, m, 25);
  CHECK(after >= before - 1e-12);
  MatC total = MatC::Zero(5, 5);
  for (const auto& e : m) total += e;
  CHECK((total - MatC::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("constrained_state_opt endpoints and validation") {
  MatC a = random_herm(4, 41);
  MatC pi = MatC::Identity(4, 4);
  pi(3, 3) = 0.0;

  auto free = constrained_state_opt<cxd>(a, pi, 1.0);
  auto [w, v] = eig_sa<cxd>(a);
  CHECK(std::abs(free.value - w(3)) < 1e-10);

  auto pinned = constrained_state_opt<cxd>(a, pi, 0.0);
  MatC sub = a.topLeftCorner(3, 3);
  auto [ws, vs] = eig_sa<cxd>(sub);
  CHECK(std::abs(pinned.value - ws(2)) < 1e-10);

  CHECK_THROWS_AS(constrained_state_opt<cxd>(a, pi, -0.1), ValidationError);
  CHECK_THROWS_AS(constrained_state_opt<cxd>(a, pi, 1.5), ValidationError);
  CHECK_THROWS_AS(constrained_state_opt<cxd>(a, MatC(2.0 * pi), 0.1),
                  ValidationError);
}

TEST_CASE("constrained_state_opt: feasible, monotone, strong duality") {
  MatC pi = MatC::Identity(4, 4);
  pi(3, 3) = 0.0;
  double prev = -1e300;
  for (double eps : {0.001, 0.01, 0.1, 0.5}) {
    MatC a = random_herm(4, 77);
    auto sol = constrained_state_opt<cxd>(a, pi, eps);
    // rho is a state satisfying the overlap constraint
    CHECK(std::abs(std::real(sol.rho.trace()) - 1.0) < 1e-9);
    auto [wr, vr] = eig_sa<cxd>(sol.rho);
    CHECK(wr.minCoeff() > -1e-10);
    CHECK(std::real(cxd((pi * sol.rho).trace())) >= 1.0 - eps - 1e-9);
    // value grows with the allowed leakage
    CHECK(sol.value >= prev - 1e-12);
    prev = sol.value;
    // dual certificate matches the primal
    CHECK(std::abs(sol.dual - sol.value) < 1e-6);
  }
}

TEST_CASE("stiefel_ascent reaches the top eigenvalue in the vector case") {
  MatC k = random_herm(6, 55);
  k = k + 6.0 * MatC::Identity(6, 6);  // PSD so the form is maximized inside
  Rng rng(3);
  MatC v0 = random_isometry<cxd>(6, 1, rng);
  auto out = stiefel_ascent<cxd>(k, v0, 400);
  auto [w, vv] = eig_sa<cxd>(k);
  CHECK(std::abs(out.value - w(5)) < 1e-6);
  CHECK((out.v.adjoint() * out.v - MatC::Identity(1, 1)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("stiefel_ascent keeps the isometry constraint on wide problems") {
  Rng rng(8);
  MatC k = herm<cxd>(gauss_matrix<cxd>(8, 8, rng));
  auto out = stiefel_ascent<cxd>(k, 2, 2, 2, 60, 123);
  CHECK((out.v.adjoint() * out.v - MatC::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK(out.steps_used >= 1);
  CHECK_THROWS_AS(stiefel_ascent<cxd>(k, MatC::Identity(3, 3), 5),
                  ValidationError);
}

TEST_CASE("seesaw driver merges deterministically and reports restarts") {
  SeeSawConfig cfg;
  cfg.restarts = 8;
  cfg.seed = 5;
  cfg.tol = 1e-12;
  cfg.max_sweeps = 50;
  // toy problem: state = scalar, sweep moves it halfway to a seeded target
  auto init = [](Rng& rng) { return rng.uniform(); };
  auto sweep = [](double& s, Rng&) {
    s = 0.5 * (s + 1.0);
    return s;
  };
  auto a = seesaw<double>(init, sweep, cfg);
  auto b = seesaw<double>(init, sweep, cfg);
  CHECK(a.value == b.value);
  CHECK(a.restart == b.restart);
  CHECK(a.restart_values.size() == 8);
  CHECK(a.converged);
  CHECK(a.value <= 1.0 + 1e-12);

  auto bad_sweep = [](double& s, Rng&) {
    s -= 1.0;
    return s;
  };
  CHECK_THROWS_AS(seesaw<double>(init, bad_sweep, cfg), ConvergenceError);
  SeeSawConfig zero = cfg;
  zero.restarts = 0;
  CHECK_THROWS_AS(seesaw<double>(init, sweep, zero), ValidationError);
}
