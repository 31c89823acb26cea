#pragma once
// Statistical machinery: aggregated-counts estimator of the task payoff,
// Azuma-Hoeffding p-value bound, Poisson bootstrap error bars, and sigma
// combination.

#include "eacomm/protocol.hpp"

#include <array>
#include <functional>

namespace eacomm::stats {

// Aggregated outcome counts: measurement y (0,1 = scored questions, 2 = flag
// check), encoding x in 0..4, outcome-projector column k in 0..7.
struct CountsTable {
  std::array<std::array<std::array<long, 8>, 5>, 3> counts{};
  long rounds_per_cell = 0;  // acquisition metadata (approximate)
  void validate() const;     // nonnegative counts
  long total() const;
  // rounds entering the task estimator: first two measurements, first four
  // encodings, all outcome columns
  long scored_total() const;
};

struct PValueInputs {
  long n = 0;      // rounds
  double mu = 0;   // observed violation
  double c = 1;    // max score-to-prior ratio
  double t = 0;    // lower-bound constant
};

// Payoff estimate from aggregated counts: each scored round contributes
// c_{bxy}/p(x,y) when its outcome falls in the b-class of the binning, zero
// for the failure class; normalized by the number of scored rounds.
double estimator(const CountsTable& counts, const protocol::TaskSpec& task,
                 const protocol::InputAssignment& assignment,
                 const protocol::BinningSpec& binning);

double azuma_exponent(const PValueInputs& in);  // -2 N mu^2 / (c+T)^2
double azuma_pvalue(const PValueInputs& in);    // exp(exponent), clamped to 1

struct BootstrapResult {
  double mean = 0;
  double sigma = 0;  // sample standard deviation (n-1 denominator)
  std::vector<double> samples;
};

// Resample every count as Poisson with the observed mean and recompute the
// functional; resample s draws from substream (seed, s), so results do not
// depend on thread count.
BootstrapResult poisson_bootstrap(
    const CountsTable& counts,
    const std::function<double(const CountsTable&)>& functional, int n_sim,
    std::uint64_t seed);

double combine_sigma(double sigma_a, double sigma_b);

}  // namespace eacomm::stats
