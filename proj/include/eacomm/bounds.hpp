#pragma once
// Almost-qudit correction pipeline: discrimination rates -> dimensional
// deviations -> corrected upper/lower success bounds via an alternating
// optimization over constrained 4-dim states and binary measurements.

#include "eacomm/optim.hpp"

#include <array>
#include <string>

namespace eacomm::bounds {

struct DiscriminationRates {
  std::array<double, 5> r{};
  std::array<double, 5> sigma{};
  void validate() const;  // r in [0,1], sigma >= 0
};

struct DeviationVector {
  std::array<double, 4> eps{};
  bool inflated = false;
  double k = 0.0;                 // sigma multiplier applied (0 = raw)
  bool clamped_negative = false;  // raw 2 - r_x - r_5 went below 0
};

enum class FieldMode { real_sym, complex_herm };
std::string to_string(FieldMode f);
FieldMode field_from_string(const std::string& s);

DeviationVector deviations_from_rates(const DiscriminationRates& rates);
DeviationVector inflate(const DeviationVector& raw,
                        const std::array<double, 4>& sigma_x, double sigma_5,
                        double k);

// Reproduction inputs: the reported mean rates with per-setting spreads
// consistent with the reported combined deviation.
DiscriminationRates bundled_rates();
DeviationVector bundled_deviations();  // inflated at k = 5

// JSON rates file {"r": [5 floats], "sigma": [5 floats]}.
DiscriminationRates parse_rates(const std::string& json_text);

// See-saw primal pack: four constrained states and the b=0 effect of the
// binary measurement for each of the two questions.
template <class S>
struct AlmostQuditState {
  std::array<Mat<S>, 4> rho;
  std::array<Mat<S>, 2> pi0;
};

struct BoundSummary {
  double value = 0.0;
  int sweeps_used = 0;
  bool converged = false;
  int restart = -1;
  std::vector<double> restart_values;
  FieldMode field = FieldMode::real_sym;
};

// max (or min) success probability over 4-dim states with
// Tr(rho_x Pi3) >= 1 - eps_x, Pi3 = diag(1,1,1,0), and binary measurements.
BoundSummary corrected_upper_bound(const DeviationVector& eps,
                                   const optim::SeeSawConfig& cfg,
                                   FieldMode field = FieldMode::real_sym);
BoundSummary corrected_lower_bound(const DeviationVector& eps,
                                   const optim::SeeSawConfig& cfg,
                                   FieldMode field = FieldMode::real_sym);

// --- templated core (exposed for property tests) ---------------------------

template <class S>
Mat<S> qutrit_projector() {
  Mat<S> pi = Mat<S>::Identity(4, 4);
  pi(3, 3) = S(0);
  return pi;
}

// One alternation: exact constrained state step, then exact sign-split
// measurement step.  direction = +1 maximizes, -1 minimizes; returns the
// direction-adjusted objective (so the see-saw driver always maximizes).
template <class S>
double almost_qudit_sweep(AlmostQuditState<S>& st,
                          const std::array<double, 4>& eps, int direction) {
  const Mat<S> pi3 = qutrit_projector<S>();
  const Mat<S> id = Mat<S>::Identity(4, 4);
  for (int x = 0; x < 4; ++x) {
    int x1 = x >> 1, x2 = x & 1;
    Mat<S> a = (x1 == 0 ? st.pi0[0] : Mat<S>(id - st.pi0[0])) +
               (x2 == 0 ? st.pi0[1] : Mat<S>(id - st.pi0[1]));
    a = optim::herm<S>(Mat<S>(a / 8.0));
    if (direction < 0) a = -a;
    st.rho[x] = optim::constrained_state_opt<S>(a, pi3, eps[x]).rho;
  }
  double value = 0.0;
  for (int y = 0; y < 2; ++y) {
    Mat<S> d = Mat<S>::Zero(4, 4);
    for (int x = 0; x < 4; ++x) {
      int bit = (y == 0) ? (x >> 1) : (x & 1);
      d += (bit == 0 ? 1.0 : -1.0) / 8.0 * st.rho[x];
    }
    auto [w, v] = optim::eig_sa<S>(d);
    Mat<S> proj = Mat<S>::Zero(4, 4);
    double gain = 0.0;
    for (int i = 0; i < 4; ++i) {
      double keep = double(direction) * w(i);
      if (keep > 0.0) {
        proj += v.col(i) * v.col(i).adjoint();
        gain += keep;
      }
    }
    st.pi0[y] = proj;
    value += gain;
  }
  // objective = sum_y [Tr(D_y pi0_y) + (1/8) sum_{x: x_y=1} 1]
  return value + double(direction) * 0.5;
}

template <class S>
AlmostQuditState<S> random_bound_state(Rng& rng) {
  AlmostQuditState<S> st;
  const Mat<S> id = Mat<S>::Identity(4, 4);
  for (int x = 0; x < 4; ++x) st.rho[x] = id / 4.0;
  for (int y = 0; y < 2; ++y) {
    Mat<S> g = optim::herm<S>(optim::gauss_matrix<S>(4, 4, rng));
    auto [w, v] = optim::eig_sa<S>(g);
    Mat<S> proj = Mat<S>::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      if (w(i) > 0.0) proj += v.col(i) * v.col(i).adjoint();
    st.pi0[y] = proj;
  }
  return st;
}

template <class S>
optim::CertifiedSolution<AlmostQuditState<S>> corrected_bound_impl(
    const DeviationVector& eps, const optim::SeeSawConfig& cfg, int direction) {
  auto init = [](Rng& rng) { return random_bound_state<S>(rng); };
  auto sweep = [&eps, direction](AlmostQuditState<S>& st, Rng&) {
    return almost_qudit_sweep<S>(st, eps.eps, direction);
  };
  auto sol = optim::seesaw<AlmostQuditState<S>>(init, sweep, cfg);
  if (direction < 0) {
    sol.value = -sol.value;
    for (double& v : sol.restart_values) v = -v;
  }
  return sol;
}

}  // namespace eacomm::bounds
