#pragma once
// Optimization engines, templated on the scalar field (double for the
// real-restricted mode, std::complex<double> otherwise): maximum-payoff POVM
// solver with a duality certificate, constrained top-eigenvalue solver,
// isometry ascent, and the generic multi-restart see-saw driver.

#include "eacomm/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eacomm::optim {

template <class S>
Mat<S> herm(const Mat<S>& a) {
  return Mat<S>(0.5 * (a + a.adjoint()));
}

template <class S>
std::pair<VecR, Mat<S>> eig_sa(const Mat<S>& a) {
  Eigen::SelfAdjointEigenSolver<Mat<S>> es(herm<S>(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

template <class S>
double spectral_norm(const Mat<S>& a) {
  auto [w, v] = eig_sa<S>(a);
  return w.cwiseAbs().maxCoeff();
}

// Inverse square root on the support, eigenvalues clamped relative to the
// largest so near-singular inputs stay bounded.
template <class S>
Mat<S> inv_sqrt_psd(const Mat<S>& a) {
  auto [w, v] = eig_sa<S>(a);
  double top = w.maxCoeff();
  if (top <= 0.0) return Mat<S>::Identity(a.rows(), a.cols());
  VecR d(w.size());
  for (int i = 0; i < w.size(); ++i)
    d(i) = 1.0 / std::sqrt(std::max(w(i), top * 1e-13));
  return Mat<S>(v * d.asDiagonal() * v.adjoint());
}

template <class S>
Mat<S> psd_clip(const Mat<S>& a) {
  auto [w, v] = eig_sa<S>(a);
  VecR d = w.cwiseMax(0.0);
  return Mat<S>(v * d.asDiagonal() * v.adjoint());
}

template <class S>
Mat<S> gauss_matrix(int rows, int cols, Rng& rng) {
  Mat<S> m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      if constexpr (std::is_same_v<S, double>)
        m(r, c) = rng.gauss();
      else
        m(r, c) = S(rng.gauss(), rng.gauss());
    }
  return m;
}

// Haar-ish random isometry: QR of a Gaussian matrix with the R-diagonal phase
// fixed so the result is deterministic in the draw.
template <class S>
Mat<S> random_isometry(int rows, int cols, Rng& rng) {
  Mat<S> g = gauss_matrix<S>(rows, cols, rng);
  Eigen::HouseholderQR<Mat<S>> qr(g);
  Mat<S> q = qr.householderQ() * Mat<S>::Identity(rows, cols);
  Mat<S> r = q.adjoint() * g;
  for (int i = 0; i < cols; ++i) {
    S d = r(i, i);
    double mag = std::abs(d);
    if (mag > 1e-300) q.col(i) *= d / S(mag);
  }
  return q;
}

// --- payoff ensembles and POVM optimization -------------------------------

template <class S>
struct PayoffEnsemble {
  int dim = 0;
  std::vector<Mat<S>> payoff;  // one Hermitian operator per outcome
  explicit PayoffEnsemble(std::vector<Mat<S>> ops) : payoff(std::move(ops)) {
    if (payoff.empty()) throw ValidationError("payoff ensemble is empty");
    dim = int(payoff.front().rows());
    for (const auto& r : payoff) {
      if (r.rows() != dim || r.cols() != dim)
        throw ValidationError("payoff ensemble dims differ");
      if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("payoff operator is not Hermitian");
    }
  }
  int outcomes() const { return int(payoff.size()); }
};

struct SeeSawConfig {
  double tol = 1e-9;     // objective change per sweep
  int max_sweeps = 500;
  int restarts = 100;
  std::uint64_t seed = 0;
  std::string init = "haar";  // reported in metadata; restarts draw from Rng
};

template <class Primal>
struct CertifiedSolution {
  double value = 0.0;
  Primal primal;
  double dual_gap = std::numeric_limits<double>::quiet_NaN();
  int sweeps_used = 0;
  bool converged = false;
  int restart = -1;
  std::vector<double> restart_values;  // merged across restarts, index = restart
};

namespace detail {

// Project approximately onto the POVM set: clip each effect PSD, renormalize
// completeness on the common support, spread any remaining deficit equally.
template <class S>
void povm_cleanup(std::vector<Mat<S>>& m) {
  int dim = int(m.front().rows());
  for (auto& e : m) e = psd_clip<S>(herm<S>(e));
  Mat<S> s = Mat<S>::Zero(dim, dim);
  for (const auto& e : m) s += e;
  Mat<S> t = inv_sqrt_psd<S>(s);
  Mat<S> total = Mat<S>::Zero(dim, dim);
  for (auto& e : m) {
    e = herm<S>(t * e * t);
    total += e;
  }
  Mat<S> deficit = Mat<S>::Identity(dim, dim) - total;
  for (auto& e : m) e += deficit / double(m.size());
}

template <class S>
double povm_value(const PayoffEnsemble<S>& ens, const std::vector<Mat<S>>& m) {
  double v = 0.0;
  for (int b = 0; b < ens.outcomes(); ++b)
    v += std::real(S((ens.payoff[b] * m[b]).trace()));
  return v;
}

// Dual certificate: Y = herm(sum R_b M_b) shifted until Y >= R_b for all b;
// returns (gap, shifted dual value).
template <class S>
std::pair<double, double> povm_gap(const PayoffEnsemble<S>& ens,
                                   const std::vector<Mat<S>>& m,
                                   double primal) {
  Mat<S> y = Mat<S>::Zero(ens.dim, ens.dim);
  for (int b = 0; b < ens.outcomes(); ++b) y += ens.payoff[b] * m[b];
  y = herm<S>(y);
  double shift = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < ens.outcomes(); ++b) {
    auto [w, v] = eig_sa<S>(Mat<S>(ens.payoff[b] - y));
    shift = std::max(shift, w.maxCoeff());
  }
  double dual = std::real(S(y.trace())) + shift * ens.dim;
  return {dual - primal, dual};
}

template <class S>
std::vector<Mat<S>> shifted_payoffs(const PayoffEnsemble<S>& ens,
                                    double* alpha_out = nullptr) {
  double low = 0.0;
  for (const auto& r : ens.payoff) {
    auto [w, v] = eig_sa<S>(r);
    low = std::min(low, w.minCoeff());
  }
  double alpha = std::max(0.0, -low) + 0.1;
  if (alpha_out) *alpha_out = alpha;
  std::vector<Mat<S>> rt;
  rt.reserve(ens.outcomes());
  for (const auto& r : ens.payoff)
    rt.push_back(Mat<S>(r + alpha * Mat<S>::Identity(ens.dim, ens.dim)));
  return rt;
}

template <class S>
void povm_fixed_point_update(const std::vector<Mat<S>>& rt,
                             std::vector<Mat<S>>& m) {
  int dim = int(m.front().rows());
  Mat<S> l = Mat<S>::Zero(dim, dim);
  for (size_t b = 0; b < m.size(); ++b) l += rt[b] * m[b] * rt[b];
  Mat<S> w = inv_sqrt_psd<S>(herm<S>(l));
  for (size_t b = 0; b < m.size(); ++b) m[b] = herm<S>(w * rt[b] * m[b] * rt[b] * w);
  povm_cleanup<S>(m);
}

}  // namespace detail

// Bounded-effort POVM improvement for see-saw sweeps: runs a fixed number of
// fixed-point iterations and keeps the best iterate, so the step never makes
// the objective worse than the input measurement.  No certificate, no throw.
template <class S>
double povm_sweep(const PayoffEnsemble<S>& ens, std::vector<Mat<S>>& effects,
                  int iters) {
  std::vector<Mat<S>> rt = detail::shifted_payoffs<S>(ens);
  std::vector<Mat<S>> cur = effects;
  double best = detail::povm_value<S>(ens, cur);
  for (int i = 0; i < iters; ++i) {
    detail::povm_fixed_point_update<S>(rt, cur);
    double v = detail::povm_value<S>(ens, cur);
    if (v > best) {
      best = v;
      effects = cur;
    }
  }
  return best;
}

// Full solve of max sum_b Tr(R_b M_b) over POVMs, terminating on certified
// dual gap <= tol.  Throws ConvergenceError (carrying the last gap) if the
// certificate is not reached within max_iters.
template <class S>
CertifiedSolution<std::vector<Mat<S>>> max_payoff_povm(
    const PayoffEnsemble<S>& ens, double tol = 1e-9, int max_iters = 5000,
    const std::vector<Mat<S>>* init = nullptr) {
  if (tol <= 0) throw ValidationError("max_payoff_povm: tol must be positive");
  int nb = ens.outcomes(), dim = ens.dim;
  std::vector<Mat<S>> m;
  if (init) {
    if (int(init->size()) != nb) throw ValidationError("init POVM size mismatch");
    m = *init;
    detail::povm_cleanup<S>(m);
  } else {
    m.assign(nb, Mat<S>(Mat<S>::Identity(dim, dim) / double(nb)));
  }
  std::vector<Mat<S>> rt = detail::shifted_payoffs<S>(ens);
  double rnorm = 0.0;
  for (const auto& r : ens.payoff) rnorm = std::max(rnorm, spectral_norm<S>(r));

  double best_val = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int stall = 0, nudges = 0;
  for (int it = 1; it <= max_iters; ++it) {
    detail::povm_fixed_point_update<S>(rt, m);
    double val = detail::povm_value<S>(ens, m);
    gap = detail::povm_gap<S>(ens, m, val).first;
    if (gap <= tol) {
      CertifiedSolution<std::vector<Mat<S>>> out;
      out.value = val;
      out.primal = m;
      out.dual_gap = gap;
      out.sweeps_used = it;
      out.converged = true;
      return out;
    }
    if (val > best_val + 1e-13) {
      best_val = val;
      stall = 0;
    } else if (++stall >= 60) {
      // fixed point stalled short of the certificate: projected subgradient
      // nudge with diminishing step, then resume
      ++nudges;
      double eta = 0.5 / (double(nudges) * std::max(rnorm, 1e-12));
      Mat<S> y = Mat<S>::Zero(dim, dim);
      for (int b = 0; b < nb; ++b) y += ens.payoff[b] * m[b];
      y = herm<S>(y);
      for (int b = 0; b < nb; ++b) m[b] += eta * (ens.payoff[b] - y);
      detail::povm_cleanup<S>(m);
      stall = 0;
    }
  }
  throw ConvergenceError("max_payoff_povm: dual gap " + std::to_string(gap) +
                             " above tolerance after max iterations",
                         gap);
}

// --- constrained top-eigenvalue solver ------------------------------------

template <class S>
struct StateOptResult {
  Mat<S> rho;
  double value = 0.0;   // Tr(A rho)
  double dual = 0.0;    // min_lambda g(lambda), equals value at optimum
  double lambda = 0.0;  // optimal dual multiplier
};

// max Tr(A rho) over states with Tr(Pi rho) >= 1 - eps, solved through the
// one-dimensional convex dual g(lambda) = lambda_max(A + lambda*Pi) -
// lambda(1-eps) with bisection on the constraint subgradient.
template <class S>
StateOptResult<S> constrained_state_opt(const Mat<S>& a, const Mat<S>& pi,
                                        double eps) {
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("constrained_state_opt: A not Hermitian");
  if ((pi * pi - pi).cwiseAbs().maxCoeff() > 1e-9)
    throw ValidationError("constrained_state_opt: Pi not a projector");
  if (eps < 0.0 || eps > 1.0)
    throw ValidationError("constrained_state_opt: eps outside [0,1]");
  const int dim = int(a.rows());
  StateOptResult<S> out;

  auto top_of = [](const Mat<S>& h) {
    auto [w, v] = eig_sa<S>(h);
    return std::pair<double, Vec<S>>{w(w.size() - 1), v.col(v.cols() - 1)};
  };

  if (eps >= 1.0 - 1e-14) {  // constraint vacuous
    auto [mu, v] = top_of(a);
    out.rho = v * v.adjoint();
    out.value = out.dual = mu;
    return out;
  }
  if (eps <= 1e-14) {  // constraint saturated: restrict to range(Pi)
    auto [pw, pv] = eig_sa<S>(pi);
    std::vector<int> cols;
    for (int i = 0; i < dim; ++i)
      if (pw(i) > 0.5) cols.push_back(i);
    if (cols.empty())
      throw ValidationError("constrained_state_opt: Pi has empty range");
    Mat<S> q(dim, int(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) q.col(int(i)) = pv.col(cols[i]);
    auto [mu, u] = top_of(Mat<S>(q.adjoint() * a * q));
    Vec<S> v = q * u;
    out.rho = v * v.adjoint();
    out.value = out.dual = mu;
    return out;
  }

  const double c = 1.0 - eps;
  auto probe = [&](double lam) {
    auto [mu, v] = top_of(Mat<S>(a + lam * pi));
    double overlap = std::real(S(v.adjoint() * pi * v));
    return std::tuple<double, Vec<S>, double>{overlap - c, v, mu};
  };

  auto [h0, v0, mu0] = probe(0.0);
  if (h0 >= 0.0) {  // unconstrained optimum already feasible
    out.rho = v0 * v0.adjoint();
    out.value = out.dual = mu0;
    return out;
  }
  double lo = 0.0, hi = 10.0 * (spectral_norm<S>(a) + 1.0);
  auto [hhi, vhi, muhi] = probe(hi);
  for (int i = 0; i < 60 && hhi < 0.0; ++i) {
    hi *= 2.0;
    std::tie(hhi, vhi, muhi) = probe(hi);
  }
  if (hhi < 0.0)
    throw ConvergenceError("constrained_state_opt: bracket expansion failed",
                           hhi);
  Vec<S> vlo = v0;
  double glo = h0 + c, ghi = hhi + c;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    auto [hm, vm, mum] = probe(mid);
    if (hm < 0.0) {
      lo = mid;
      vlo = vm;
      glo = hm + c;
    } else {
      hi = mid;
      vhi = vm;
      ghi = hm + c;
      muhi = mum;
    }
  }
  // mix the two bracket-endpoint eigenvectors so the constraint holds with
  // equality (handles the top-eigenvalue crossing at lambda*)
  double t = (ghi - glo > 1e-13) ? std::clamp((c - glo) / (ghi - glo), 0.0, 1.0)
                                 : 1.0;
  Mat<S> rho_lo = vlo * vlo.adjoint(), rho_hi = vhi * vhi.adjoint();
  out.rho = (1.0 - t) * rho_lo + t * rho_hi;
  out.value = std::real(S((a * out.rho).trace()));
  out.lambda = hi;
  out.dual = muhi - hi * c;
  return out;
}

// --- isometry ascent -------------------------------------------------------

template <class S>
struct StiefelResult {
  Mat<S> v;  // isometry, rows >= cols
  double value = 0.0;
  int steps_used = 0;
};

template <class S>
Mat<S> polar_retract(const Mat<S>& m) {
  Eigen::JacobiSVD<Mat<S>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Mat<S>(svd.matrixU() * svd.matrixV().adjoint());
}

// Maximize the quadratic form vec(V)^dag K vec(V) (K Hermitian, column-major
// vec) over isometries V by gradient ascent with polar retraction and
// step-halving line search; the objective never decreases.
template <class S>
StiefelResult<S> stiefel_ascent(const Mat<S>& k, Mat<S> v, int steps) {
  const int rows = int(v.rows()), cols = int(v.cols());
  if (k.rows() != rows * cols)
    throw ValidationError("stiefel_ascent: K size does not match vec(V)");
  auto value_of = [&](const Mat<S>& m) {
    Eigen::Map<const Vec<S>> x(m.data(), rows * cols);
    return std::real(S(x.adjoint() * k * x));
  };
  double knorm = std::max(spectral_norm<S>(k), 1e-12);
  double eta = 1.0 / knorm, eta_cap = 1e3 / knorm;
  StiefelResult<S> out{std::move(v), 0.0, 0};
  out.value = value_of(out.v);
  for (int step = 0; step < steps; ++step) {
    Eigen::Map<const Vec<S>> x(out.v.data(), rows * cols);
    Vec<S> gvec = k * x;
    Eigen::Map<const Mat<S>> g(gvec.data(), rows, cols);
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      Mat<S> cand = polar_retract<S>(Mat<S>(out.v + eta * g));
      double val = value_of(cand);
      if (val > out.value) {
        out.v = std::move(cand);
        out.value = val;
        eta = std::min(eta * 2.0, eta_cap);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    out.steps_used = step + 1;
    if (!accepted) break;  // stationary to line-search resolution
  }
  return out;
}

// Convenience form matching the channel-optimization use: V maps in_dim to
// out_dim*anc_dim, randomly initialized from the seed.
template <class S>
StiefelResult<S> stiefel_ascent(const Mat<S>& k, int in_dim, int out_dim,
                                int anc_dim, int steps, std::uint64_t seed) {
  if (anc_dim < 1) throw ValidationError("stiefel_ascent: anc_dim < 1");
  Rng rng(seed);
  return stiefel_ascent<S>(k, random_isometry<S>(out_dim * anc_dim, in_dim, rng),
                           steps);
}

// --- generic see-saw driver ------------------------------------------------

// init: Rng& -> State.  sweep: (State&, Rng&) -> objective after one full
// alternation.  Restarts run independently (parallel when OpenMP is enabled)
// on substreams of cfg.seed and merge deterministically by (value, restart).
template <class State, class InitFn, class SweepFn>
CertifiedSolution<State> seesaw(InitFn&& init, SweepFn&& sweep,
                                const SeeSawConfig& cfg) {
  if (cfg.restarts < 1) throw ValidationError("seesaw: restarts must be >= 1");
  if (cfg.tol <= 0.0) throw ValidationError("seesaw: tol must be positive");
  const int n = cfg.restarts;
  std::vector<double> values(n, -std::numeric_limits<double>::infinity());
  std::vector<int> sweeps(n, 0);
  std::vector<char> conv(n, 0);
  std::vector<std::optional<State>> finals(n);
  std::string error;
  double error_gap = 0.0;

#pragma omp parallel for schedule(dynamic) num_threads(eacomm::max_threads())
  for (int r = 0; r < n; ++r) {
    try {
      Rng rng(cfg.seed, std::uint64_t(r));
      State state = init(rng);
      double prev = -std::numeric_limits<double>::infinity();
      for (int sw = 1; sw <= cfg.max_sweeps; ++sw) {
        double val = sweep(state, rng);
        sweeps[r] = sw;
        values[r] = val;
        if (val < prev - 1e-9)
          throw ConvergenceError("seesaw: objective decreased by " +
                                     std::to_string(prev - val),
                                 prev - val);
        if (val - prev <= cfg.tol && val >= prev - 1e-12) {
          conv[r] = 1;
          break;
        }
        prev = val;
      }
      finals[r] = std::move(state);
    } catch (const ConvergenceError& e) {
#pragma omp critical
      if (error.empty()) {
        error = e.what();
        error_gap = e.last_gap;
      }
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw ConvergenceError(error, error_gap);

  int best = 0;
  for (int r = 1; r < n; ++r)
    if (values[r] > values[best]) best = r;
  CertifiedSolution<State> out;
  out.value = values[best];
  out.primal = std::move(*finals[best]);
  out.sweeps_used = sweeps[best];
  out.converged = conv[best] != 0;
  out.restart = best;
  out.restart_values = std::move(values);
  return out;
}

}  // namespace eacomm::optim
