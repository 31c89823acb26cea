#include "eacomm/stats.hpp"

#include <cmath>
#include <string>

namespace eacomm::stats {

void CountsTable::validate() const {
  for (const auto& meas : counts)
    for (const auto& row : meas)
      for (long v : row)
        if (v < 0) throw ValidationError("negative count");
}

long CountsTable::total() const {
  long t = 0;
  for (const auto& meas : counts)
    for (const auto& row : meas)
      for (long v : row) t += v;
  return t;
}

long CountsTable::scored_total() const {
  long t = 0;
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x)
      for (long v : counts[y][x]) t += v;
  return t;
}

double estimator(const CountsTable& counts, const protocol::TaskSpec& task,
                 const protocol::InputAssignment& assignment,
                 const protocol::BinningSpec& binning) {
  counts.validate();
  if (task.prior <= 0.0)
    throw ValidationError("estimator: zero prior on a scored setting");
  long n = counts.scored_total();
  if (n == 0) throw ValidationError("estimator: no scored rounds");
  double score = 0.0;
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) {
      int pair = (assignment.bits[x].first << 1) | assignment.bits[x].second;
      for (int b = 0; b < 2; ++b) {
        double weight = task.c[b][pair][y] / task.prior;
        const auto& cls = (b == 0) ? binning.pos : binning.neg;
        long hits = 0;
        for (int k : cls) hits += counts.counts[y][x][k];
        score += weight * double(hits);
      }
    }
  return score / double(n);
}

double azuma_exponent(const PValueInputs& in) {
  if (in.n < 1) throw ValidationError("azuma: rounds must be >= 1");
  double denom = in.c + in.t;
  if (denom <= 0.0) throw ValidationError("azuma: c + T must be positive");
  return -2.0 * double(in.n) * in.mu * in.mu / (denom * denom);
}

double azuma_pvalue(const PValueInputs& in) {
  return std::min(1.0, std::exp(azuma_exponent(in)));
}

BootstrapResult poisson_bootstrap(
    const CountsTable& counts,
    const std::function<double(const CountsTable&)>& functional, int n_sim,
    std::uint64_t seed) {
  counts.validate();
  if (n_sim < 2) throw ValidationError("bootstrap: n_sim must be >= 2");
  if (counts.total() == 0) throw ValidationError("bootstrap: empty counts table");

  BootstrapResult out;
  out.samples.assign(n_sim, 0.0);
  std::string error;

#pragma omp parallel for schedule(static) num_threads(eacomm::max_threads())
  for (int s = 0; s < n_sim; ++s) {
    try {
      Rng rng(seed, std::uint64_t(s));
      CountsTable resampled = counts;
      for (auto& meas : resampled.counts)
        for (auto& row : meas)
          for (long& v : row) v = rng.poisson(double(v));
      out.samples[s] = functional(resampled);
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty())
        error = "bootstrap: functional failed at resample " +
                std::to_string(s) + ": " + e.what();
    }
  }
  if (!error.empty()) throw ValidationError(error);

  double mean = 0.0;
  for (double v : out.samples) mean += v;
  mean /= double(n_sim);
  double ss = 0.0;
  for (double v : out.samples) ss += (v - mean) * (v - mean);
  out.mean = mean;
  out.sigma = std::sqrt(ss / double(n_sim - 1));
  return out;
}

double combine_sigma(double sigma_a, double sigma_b) {
  if (sigma_a < 0.0 || sigma_b < 0.0)
    throw ValidationError("combine_sigma: negative input");
  return std::hypot(sigma_a, sigma_b);
}

}  // namespace eacomm::stats
