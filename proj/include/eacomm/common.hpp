#pragma once
// Shared scalar/matrix aliases, error types, and the deterministic RNG used by
// every stochastic component.  All randomness flows through Rng so that a
// (seed, stream) pair fully determines results independent of thread count.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace eacomm {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Input/schema violations; mapped to exit code 2 by the CLI.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optimizer failed to certify convergence; carries the last dual gap seen.
// Mapped to exit code 3 by the CLI.
struct ConvergenceError : std::runtime_error {
  double last_gap;
  ConvergenceError(const std::string& msg, double gap)
      : std::runtime_error(msg), last_gap(gap) {}
};

// Relative entropy with support violation (divergence is +inf).
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic substream RNG.  Distinct (seed, stream) pairs give
// independent, reproducible sequences; gaussians/poissons are hand-rolled so
// the sequence does not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
    std::uint64_t b = splitmix64(s);
    eng_.seed(a ^ (b << 1));
  }

  double uniform() {  // [0, 1)
    return double(eng_() >> 11) * 0x1.0p-53;
  }

  double gauss() {  // Box-Muller with cached spare
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    return std::uint64_t(uniform() * double(n)) % n;
  }

  // Poisson draw, exact for all means: exponential-sum for small lambda,
  // Hormann's PTRS transformed rejection for large.
  long poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 10.0) {
      long k = 0;
      double t = 0.0;
      while (true) {
        double u = 0.0;
        while (u <= 0.0) u = uniform();
        t += -std::log(u);
        if (t > lambda) return k;
        ++k;
      }
    }
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
      double u = uniform() - 0.5;
      double v = uniform();
      double us = 0.5 - std::abs(u);
      double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
      if (us >= 0.07 && v <= vr) return long(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) * inv_alpha / (a / (us * us) + b) <=
          kf * loglam - lambda - std::lgamma(kf + 1.0)) {
        return long(kf);
      }
    }
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Thread cap honoring EACOMM_THREADS (used by the OpenMP kernels).
int max_threads();

}  // namespace eacomm
