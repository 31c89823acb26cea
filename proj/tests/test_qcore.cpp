#include "eacomm/qcore.hpp"

#include <doctest.h>

#include <cmath>

using namespace eacomm;
using namespace eacomm::qcore;

namespace {

double maxabs(const MatC& a) { return a.cwiseAbs().maxCoeff(); }

DensityOperator random_state(int dim, std::uint64_t seed,
                             std::vector<int> dims) {
  Rng rng(seed);
  MatC g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) g(r, c) = cxd(rng.gauss(), rng.gauss());
  MatC rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator(rho, std::move(dims));
}

}  // namespace

TEST_CASE("validated types reject malformed inputs") {
  MatC bad = MatC::Identity(2, 2);
  bad(0, 0) = cxd(2.0, 0.0);  // trace 3
  CHECK_THROWS_AS(DensityOperator(bad, {2}), ValidationError);
  MatC neg = MatC::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(neg, {2}), ValidationError);
  CHECK_THROWS_AS(DensityOperator(MatC::Identity(4, 4) / 4.0, {2, 3}),
                  ValidationError);  // dims product mismatch
  CHECK_THROWS_AS(UnitaryOperator(MatC(2.0 * MatC::Identity(2, 2))),
                  ValidationError);
  CHECK_THROWS_AS(ChannelSpec(2, 2, {MatC(0.5 * MatC::Identity(2, 2))}),
                  ValidationError);  // incomplete Kraus set
  CHECK_THROWS_AS(Povm({MatC(-0.1 * MatC::Identity(2, 2)),
                        MatC(1.1 * MatC::Identity(2, 2))}),
                  ValidationError);
}

TEST_CASE("tensor and kets follow the left-major kron convention") {
  MatC x = pauli_x(), z = pauli_z(), id = MatC::Identity(2, 2);
  MatC xz = tensor({x, z});
  // (x (x) z)|10> = |00> * (-1)^? : x|1>=|0>, z|0>=|0> -> |00>
  VecC v = xz * tensor_kets({ket(2, 1), ket(2, 0)});
  CHECK(maxabs(v - VecC(tensor_kets({ket(2, 0), ket(2, 0)}))) < 1e-14);
  CHECK(maxabs(tensor({id, id}) - MatC::Identity(4, 4)) == 0.0);

  // cnot truth table, control on qubit 1: |10> -> |11>
  VecC w = cnot(1) * tensor_kets({ket(2, 1), ket(2, 0)});
  CHECK(maxabs(w - VecC(tensor_kets({ket(2, 1), ket(2, 1)}))) < 1e-14);
  // control on qubit 2: |01> -> |11>
  VecC u = cnot(2) * tensor_kets({ket(2, 0), ket(2, 1)});
  CHECK(maxabs(u - VecC(tensor_kets({ket(2, 1), ket(2, 1)}))) < 1e-14);
  CHECK_THROWS_AS(cnot(3), ValidationError);
}

TEST_CASE("permute_ket reorders tensor slots") {
  Rng rng(7);
  VecC a(2), b(3), c(2);
  for (int i = 0; i < 2; ++i) a(i) = cxd(rng.gauss(), rng.gauss());
  for (int i = 0; i < 3; ++i) b(i) = cxd(rng.gauss(), rng.gauss());
  for (int i = 0; i < 2; ++i) c(i) = cxd(rng.gauss(), rng.gauss());
  VecC abc = tensor_kets({a, b, c});
  // output slot k draws from source slot perm[k]: (b,c,a) <- perm {1,2,0}
  VecC out = permute_ket(abc, {1, 2, 0}, {2, 3, 2});
  CHECK(maxabs(out - VecC(tensor_kets({b, c, a}))) < 1e-13);
  // identity permutation is a no-op
  CHECK(maxabs(permute_ket(abc, {0, 1, 2}, {2, 3, 2}) - abc) == 0.0);
  CHECK_THROWS_AS(permute_ket(abc, {0, 0, 1}, {2, 3, 2}), ValidationError);
}

TEST_CASE("phi_plus marginals are maximally mixed") {
  for (int d : {2, 4}) {
    VecC v = phi_plus(d);
    CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    DensityOperator rho(v * v.adjoint(), {d, d});
    auto red = partial_trace(rho, {0});
    CHECK(maxabs(red.rho - MatC::Identity(d, d) / double(d)) < 1e-14);
  }
}

TEST_CASE("partial trace is trace preserving and consistent") {
  auto rho = random_state(12, 3, {2, 3, 2});
  auto r01 = partial_trace(rho, {0, 1});
  CHECK(std::abs(std::real(r01.rho.trace()) - 1.0) < 1e-12);
  CHECK(r01.dims == std::vector<int>{2, 3});
  // tracing in two steps matches tracing at once
  auto r0 = partial_trace(r01, {0});
  auto direct = partial_trace(rho, {0});
  CHECK(maxabs(r0.rho - direct.rho) < 1e-13);
  CHECK_THROWS_AS(partial_trace(rho, {}), ValidationError);
  CHECK_THROWS_AS(partial_trace(rho, {3}), ValidationError);
}

TEST_CASE("apply_channel matches unitary conjugation") {
  Rng rng(11);
  MatC g(2, 2);
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r) g(r, c) = cxd(rng.gauss(), rng.gauss());
  Eigen::HouseholderQR<MatC> qr(g);
  MatC u = qr.householderQ();
  ChannelSpec ch(2, 2, {u});
  auto rho = random_state(6, 5, {3, 2});
  auto out = apply_channel(ch, rho, 1);
  MatC big = tensor({MatC::Identity(3, 3), u});
  CHECK(maxabs(out.rho - big * rho.rho * big.adjoint()) < 1e-12);
}

TEST_CASE("born probabilities are a distribution") {
  auto rho = random_state(4, 9, {4});
  std::vector<MatC> eff;
  for (int i = 0; i < 4; ++i) {
    MatC e = MatC::Zero(4, 4);
    e(i, i) = 1.0;
    eff.push_back(e);
  }
  VecR p = born(rho, Povm(eff));
  CHECK(std::abs(p.sum() - 1.0) < 1e-12);
  CHECK(p.minCoeff() >= -1e-14);
}

TEST_CASE("eig_herm reconstructs, sorts ascending, fixes phase") {
  Rng rng(13);
  MatC g(5, 5);
  for (int c = 0; c < 5; ++c)
    for (int r = 0; r < 5; ++r) g(r, c) = cxd(rng.gauss(), rng.gauss());
  MatC a = hermitize(g);
  auto [w, v] = eig_herm(a);
  CHECK(maxabs(v * w.asDiagonal() * v.adjoint() - a) < 1e-11);
  for (int i = 1; i < 5; ++i) CHECK(w(i) >= w(i - 1));
  auto [w2, v2] = eig_herm(a);
  CHECK(maxabs(v - v2) == 0.0);  // deterministic including phases
}

TEST_CASE("sign_observable splits into orthogonal projectors") {
  VecR d(5);
  d << -2.0, -0.5, 0.0, 1e-9, 3.0;
  auto s = sign_observable(MatC(d.cast<cxd>().asDiagonal()));
  CHECK(s.rank_neg == 2);
  CHECK(s.rank_zero == 2);
  CHECK(s.rank_pos == 1);
  CHECK(maxabs(s.pos + s.neg + s.zero - MatC::Identity(5, 5)) < 1e-12);
  CHECK(maxabs(s.pos * s.neg) < 1e-12);
  CHECK(maxabs(s.pos * s.pos - s.pos) < 1e-12);
}

TEST_CASE("trace_norm, fidelity, relative entropy basics") {
  VecR d(3);
  d << -1.5, 0.0, 2.0;
  CHECK(std::abs(trace_norm(MatC(d.cast<cxd>().asDiagonal())) - 3.5) < 1e-12);

  auto rho = random_state(3, 17, {3});
  CHECK(std::abs(fidelity(rho, rho) - 1.0) < 1e-10);
  auto sigma = random_state(3, 19, {3});
  double f = fidelity(rho, sigma);
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  CHECK(relative_entropy(rho, rho) < 1e-9);
  CHECK(relative_entropy(rho, sigma) > 0.0);
  // pure states with different support diverge
  DensityOperator p0(ket(2, 0) * ket(2, 0).adjoint(), {2});
  DensityOperator p1(ket(2, 1) * ket(2, 1).adjoint(), {2});
  CHECK_THROWS_AS(relative_entropy(p0, p1), DivergenceError);
}

TEST_CASE("choi matrix of a CPTP map is PSD with identity input marginal") {
  MatC k0 = std::sqrt(0.7) * MatC::Identity(2, 2);
  MatC k1 = std::sqrt(0.3) * pauli_x();
  ChannelSpec ch(2, 2, {k0, k1});
  MatC c = choi(ch);
  auto [w, v] = eig_herm(c);
  CHECK(w.minCoeff() > -1e-12);
  DensityOperator cd(c / 2.0, {2, 2});
  auto in_marg = partial_trace(cd, {0});
  CHECK(maxabs(in_marg.rho - MatC::Identity(2, 2) / 2.0) < 1e-12);
}

TEST_CASE("rng substreams are deterministic and disjoint") {
  Rng a(42, 1), b(42, 1), c(42, 2);
  bool equal = true, differ = false;
  for (int i = 0; i < 32; ++i) {
    double x = a.uniform(), y = b.uniform(), z = c.uniform();
    equal = equal && (x == y);
    differ = differ || (x != z);
  }
  CHECK(equal);
  CHECK(differ);
  Rng p(5);
  long total = 0;
  for (int i = 0; i < 2000; ++i) total += p.poisson(3.0);
  CHECK(total > 2000 * 3 * 0.9);
  CHECK(total < 2000 * 3 * 1.1);
}
