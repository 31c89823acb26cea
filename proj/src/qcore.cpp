#include "eacomm/qcore.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eacomm {

int max_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("EACOMM_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace eacomm

namespace eacomm::qcore {

bool is_hermitian(const MatC& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

void check_dims(const MatC& m, const std::vector<int>& dims,
                const char* what) {
  if (m.rows() != m.cols()) throw ValidationError(std::string(what) + ": not square");
  if (dims.empty() || product(dims) != m.rows())
    throw ValidationError(std::string(what) + ": subsystem dims do not match matrix size");
  for (int d : dims)
    if (d < 1) throw ValidationError(std::string(what) + ": nonpositive subsystem dim");
}

}  // namespace

DensityOperator::DensityOperator(MatC m, std::vector<int> subsystem_dims)
    : rho(std::move(m)), dims(std::move(subsystem_dims)) {
  check_dims(rho, dims, "DensityOperator");
  if (!is_hermitian(rho, 1e-10))
    throw ValidationError("DensityOperator: not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatC> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("DensityOperator: negative eigenvalue");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10)
    throw ValidationError("DensityOperator: trace != 1");
}

UnitaryOperator::UnitaryOperator(MatC m) : u(std::move(m)) {
  if (u.rows() != u.cols()) throw ValidationError("UnitaryOperator: not square");
  MatC r = u.adjoint() * u - MatC::Identity(u.rows(), u.cols());
  if (r.cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("UnitaryOperator: U^dag U != I");
}

ChannelSpec::ChannelSpec(int in, int out, std::vector<MatC> ops)
    : in_dim(in), out_dim(out), kraus(std::move(ops)) {
  if (in < 1 || out < 1 || kraus.empty())
    throw ValidationError("ChannelSpec: empty spec");
  MatC s = MatC::Zero(in, in);
  for (const MatC& k : kraus) {
    if (k.rows() != out || k.cols() != in)
      throw ValidationError("ChannelSpec: Kraus operator shape mismatch");
    s += k.adjoint() * k;
  }
  if ((s - MatC::Identity(in, in)).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("ChannelSpec: sum K^dag K != I");
}

Povm::Povm(std::vector<MatC> ops) : effects(std::move(ops)) {
  if (effects.empty()) throw ValidationError("Povm: no effects");
  const int d = int(effects.front().rows());
  MatC s = MatC::Zero(d, d);
  for (const MatC& e : effects) {
    if (e.rows() != d || e.cols() != d)
      throw ValidationError("Povm: effect shape mismatch");
    if (!is_hermitian(e, 1e-10)) throw ValidationError("Povm: effect not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatC> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw ValidationError("Povm: effect not PSD");
    s += e;
  }
  if ((s - MatC::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("Povm: effects do not sum to identity");
}

VecC ket(int dim, int index) {
  if (index < 0 || index >= dim) throw ValidationError("ket: index out of range");
  VecC v = VecC::Zero(dim);
  v(index) = 1.0;
  return v;
}

MatC pauli_x() {
  MatC m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

MatC pauli_y() {
  MatC m(2, 2);
  m << 0, cxd(0, -1), cxd(0, 1), 0;
  return m;
}

MatC pauli_z() {
  MatC m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

MatC cnot(int control) {
  MatC m = MatC::Zero(4, 4);
  if (control == 1) {
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  } else if (control == 2) {
    m(0, 0) = m(3, 1) = m(2, 2) = m(1, 3) = 1.0;
  } else {
    throw ValidationError("cnot: control must be 1 or 2");
  }
  return m;
}

VecC phi_plus(int d) {
  VecC v = VecC::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
  return v;
}

MatC tensor(const std::vector<MatC>& factors) {
  if (factors.empty()) throw ValidationError("tensor: no factors");
  MatC acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const MatC& b = factors[k];
    MatC out(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (int i = 0; i < acc.rows(); ++i)
      for (int j = 0; j < acc.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
    acc = std::move(out);
  }
  return acc;
}

VecC tensor_kets(const std::vector<VecC>& factors) {
  if (factors.empty()) throw ValidationError("tensor_kets: no factors");
  VecC acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const VecC& b = factors[k];
    VecC out(acc.size() * b.size());
    for (int i = 0; i < acc.size(); ++i)
      out.segment(i * b.size(), b.size()) = acc(i) * b;
    acc = std::move(out);
  }
  return acc;
}

VecC permute_ket(const VecC& v, const std::vector<int>& perm,
                 const std::vector<int>& dims) {
  const int n = int(dims.size());
  if (int(perm.size()) != n) throw ValidationError("permute_ket: perm size");
  if (product(dims) != v.size()) throw ValidationError("permute_ket: dims");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw ValidationError("permute_ket: perm is not a permutation");
    seen[p] = true;
  }
  std::vector<int> out_dims(n);
  for (int k = 0; k < n; ++k) out_dims[k] = dims[perm[k]];
  VecC out(v.size());
  std::vector<int> idx(n, 0);  // multi-index over source dims
  for (int lin = 0; lin < v.size(); ++lin) {
    int rem = lin;
    for (int k = n - 1; k >= 0; --k) {
      idx[k] = rem % dims[k];
      rem /= dims[k];
    }
    int out_lin = 0;
    for (int k = 0; k < n; ++k) out_lin = out_lin * out_dims[k] + idx[perm[k]];
    out(out_lin) = v(lin);
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& op,
                              const std::vector<int>& keep) {
  const int n = int(op.dims.size());
  if (keep.empty()) throw ValidationError("partial_trace: keep set empty");
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw ValidationError("partial_trace: bad subsystem index");
    kept[k] = true;
  }
  std::vector<int> keep_dims, trace_dims, keep_idx, trace_idx;
  for (int k = 0; k < n; ++k) {
    if (kept[k]) { keep_dims.push_back(op.dims[k]); keep_idx.push_back(k); }
    else { trace_dims.push_back(op.dims[k]); trace_idx.push_back(k); }
  }
  const int dk = product(keep_dims);
  const int dt = trace_dims.empty() ? 1 : product(trace_dims);
  MatC out = MatC::Zero(dk, dk);

  std::vector<int> strides(n);
  int s = 1;
  for (int k = n - 1; k >= 0; --k) { strides[k] = s; s *= op.dims[k]; }

  auto lin_of = [&](const std::vector<int>& subsys, int flat) {
    int lin = 0;
    for (int k = int(subsys.size()) - 1; k >= 0; --k) {
      lin += (flat % op.dims[subsys[k]]) * strides[subsys[k]];
      flat /= op.dims[subsys[k]];
    }
    return lin;
  };

  for (int i = 0; i < dk; ++i) {
    const int ri = lin_of(keep_idx, i);
    for (int j = 0; j < dk; ++j) {
      const int cj = lin_of(keep_idx, j);
      cxd acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        const int rt = lin_of(trace_idx, t);
        acc += op.rho(ri + rt, cj + rt);
      }
      out(i, j) = acc;
    }
  }
  return DensityOperator(hermitize(out), keep_dims);
}

DensityOperator apply_channel(const ChannelSpec& ch, const DensityOperator& rho,
                              int on_subsystem) {
  const int n = int(rho.dims.size());
  if (on_subsystem < 0 || on_subsystem >= n)
    throw ValidationError("apply_channel: bad subsystem index");
  if (rho.dims[on_subsystem] != ch.in_dim)
    throw ValidationError("apply_channel: subsystem dim != channel in_dim");
  // lift each Kraus operator to the full space
  const int before = product(std::vector<int>(rho.dims.begin(),
                                              rho.dims.begin() + on_subsystem));
  const int after = product(std::vector<int>(rho.dims.begin() + on_subsystem + 1,
                                             rho.dims.end()));
  MatC out = MatC::Zero(before * ch.out_dim * after, before * ch.out_dim * after);
  for (const MatC& k : ch.kraus) {
    MatC kf = tensor({MatC::Identity(before, before), k,
                      MatC::Identity(after, after)});
    out += kf * rho.rho * kf.adjoint();
  }
  std::vector<int> out_dims = rho.dims;
  out_dims[on_subsystem] = ch.out_dim;
  return DensityOperator(hermitize(out), out_dims);
}

VecR born(const DensityOperator& rho, const Povm& m) {
  if (rho.dim() != m.dim()) throw ValidationError("born: dimension mismatch");
  VecR p(m.outcomes());
  for (int b = 0; b < m.outcomes(); ++b)
    p(b) = (rho.rho * m.effects[b]).trace().real();
  return p;
}

std::pair<VecR, MatC> eig_herm(const MatC& a) {
  if (!is_hermitian(a, 1e-9)) throw ValidationError("eig_herm: not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatC> es(hermitize(a));
  VecR w = es.eigenvalues();
  MatC v = es.eigenvectors();
  // deterministic phase: largest-magnitude component made real positive
  for (int c = 0; c < v.cols(); ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < v.rows(); ++r) {
      double m = std::abs(v(r, c));
      if (m > best + 1e-12) { best = m; imax = r; }
    }
    cxd z = v(imax, c);
    if (std::abs(z) > 0) v.col(c) *= std::conj(z) / std::abs(z);
  }
  // stable ascending order with lexicographic tie-break on the vectors
  std::vector<int> order(v.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (w(i) != w(j)) return w(i) < w(j);
    for (int r = 0; r < v.rows(); ++r) {
      double di = v(r, i).real(), dj = v(r, j).real();
      if (std::abs(di - dj) > 1e-12) return di < dj;
      di = v(r, i).imag(); dj = v(r, j).imag();
      if (std::abs(di - dj) > 1e-12) return di < dj;
    }
    return false;
  });
  VecR ws(w.size());
  MatC vs(v.rows(), v.cols());
  for (int k = 0; k < int(order.size()); ++k) {
    ws(k) = w(order[k]);
    vs.col(k) = v.col(order[k]);
  }
  return {ws, vs};
}

SignSpaces sign_observable(const MatC& a, double zero_tol) {
  auto [w, v] = eig_herm(a);
  const int d = int(w.size());
  SignSpaces s;
  s.pos = MatC::Zero(d, d);
  s.neg = MatC::Zero(d, d);
  s.zero = MatC::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    MatC pk = v.col(k) * v.col(k).adjoint();
    if (w(k) > zero_tol) { s.pos += pk; ++s.rank_pos; }
    else if (w(k) < -zero_tol) { s.neg += pk; ++s.rank_neg; }
    else { s.zero += pk; ++s.rank_zero; }
  }
  return s;
}

double trace_norm(const MatC& a) {
  Eigen::JacobiSVD<MatC> svd(a);
  return svd.singularValues().sum();
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw ValidationError("fidelity: dimension mismatch");
  auto [w, v] = eig_herm(rho.rho);
  VecR wc = w.cwiseMax(0.0);
  MatC sqrt_rho = v * wc.cwiseSqrt().asDiagonal() * v.adjoint();
  MatC inner = sqrt_rho * sigma.rho * sqrt_rho;
  auto [wi, vi] = eig_herm(inner);
  double t = wi.cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, t * t);
}

double relative_entropy(const DensityOperator& rho0, const DensityOperator& rho) {
  if (rho0.dim() != rho.dim())
    throw ValidationError("relative_entropy: dimension mismatch");
  const double tol = 1e-9;
  auto [w0, v0] = eig_herm(rho0.rho);
  auto [w1, v1] = eig_herm(rho.rho);
  // support check: weight of rho0 outside support(rho) must vanish
  for (int k = 0; k < w1.size(); ++k) {
    if (w1(k) <= tol) {
      double overlap = (v1.col(k).adjoint() * rho0.rho * v1.col(k))(0).real();
      if (overlap > tol)
        throw DivergenceError("relative_entropy: support violation (divergence infinite)");
    }
  }
  const double lg2 = std::log(2.0);
  double h0 = 0.0;  // Tr rho0 log2 rho0
  for (int k = 0; k < w0.size(); ++k)
    if (w0(k) > tol) h0 += w0(k) * std::log(w0(k)) / lg2;
  double cross = 0.0;  // Tr rho0 log2 rho
  for (int k = 0; k < w1.size(); ++k) {
    if (w1(k) > tol) {
      double overlap = (v1.col(k).adjoint() * rho0.rho * v1.col(k))(0).real();
      cross += overlap * std::log(w1(k)) / lg2;
    }
  }
  return std::max(0.0, h0 - cross);
}

MatC choi(const ChannelSpec& ch) {
  // sum_{ij} |i><j| (x) Lambda(|i><j|)
  const int di = ch.in_dim, dout = ch.out_dim;
  MatC c = MatC::Zero(di * dout, di * dout);
  for (const MatC& k : ch.kraus) {
    // vec(K) vec(K)^dag with vec over (in (x) out) row-major pairing
    VecC vk(di * dout);
    for (int i = 0; i < di; ++i)
      for (int o = 0; o < dout; ++o) vk(i * dout + o) = k(o, i);
    c += vk * vk.adjoint();
  }
  return c;
}

}  // namespace eacomm::qcore
