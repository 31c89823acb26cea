#include "eacomm/bounds.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace eacomm::bounds {

void DiscriminationRates::validate() const {
  for (double v : r)
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("discrimination rate outside [0,1]");
  for (double s : sigma)
    if (!(s >= 0.0)) throw ValidationError("negative rate deviation");
}

std::string to_string(FieldMode f) {
  return f == FieldMode::real_sym ? "real" : "complex";
}

FieldMode field_from_string(const std::string& s) {
  if (s == "real") return FieldMode::real_sym;
  if (s == "complex") return FieldMode::complex_herm;
  throw ValidationError("unknown field mode: " + s);
}

DeviationVector deviations_from_rates(const DiscriminationRates& rates) {
  rates.validate();
  DeviationVector d;
  for (int x = 0; x < 4; ++x) {
    double raw = 2.0 - rates.r[x] - rates.r[4];
    if (raw < 0.0) d.clamped_negative = true;
    d.eps[x] = std::clamp(raw, 0.0, 1.0);
  }
  return d;
}

DeviationVector inflate(const DeviationVector& raw,
                        const std::array<double, 4>& sigma_x, double sigma_5,
                        double k) {
  if (k < 0.0) throw ValidationError("inflate: k must be nonnegative");
  DeviationVector d = raw;
  for (int x = 0; x < 4; ++x) {
    double combined = std::sqrt(sigma_x[x] * sigma_x[x] + sigma_5 * sigma_5);
    d.eps[x] = std::clamp(raw.eps[x] + k * combined, 0.0, 1.0);
  }
  d.inflated = true;
  d.k = k;
  return d;
}

DiscriminationRates bundled_rates() {
  DiscriminationRates rates;
  rates.r = {0.9990, 0.9994, 0.9987, 0.9993, 0.9977};
  rates.sigma = {0.0001, 0.0001, 0.0001, 0.0001, 0.0004};
  return rates;
}

DeviationVector bundled_deviations() {
  DiscriminationRates rates = bundled_rates();
  return inflate(deviations_from_rates(rates),
                 {rates.sigma[0], rates.sigma[1], rates.sigma[2], rates.sigma[3]},
                 rates.sigma[4], 5.0);
}

DiscriminationRates parse_rates(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("rates file is not valid JSON: ") +
                          e.what());
  }
  if (!j.contains("r") || !j["r"].is_array() || j["r"].size() != 5)
    throw ValidationError("rates file must contain \"r\": [5 floats]");
  DiscriminationRates rates;
  for (int i = 0; i < 5; ++i) rates.r[i] = j["r"][i].get<double>();
  if (j.contains("sigma")) {
    if (!j["sigma"].is_array() || j["sigma"].size() != 5)
      throw ValidationError("\"sigma\" must be an array of 5 floats");
    for (int i = 0; i < 5; ++i) rates.sigma[i] = j["sigma"][i].get<double>();
  }
  rates.validate();
  return rates;
}

namespace {

template <class S>
BoundSummary run_bound(const DeviationVector& eps,
                       const optim::SeeSawConfig& cfg, FieldMode field,
                       int direction) {
  auto sol = corrected_bound_impl<S>(eps, cfg, direction);
  BoundSummary out;
  out.value = sol.value;
  out.sweeps_used = sol.sweeps_used;
  out.converged = sol.converged;
  out.restart = sol.restart;
  out.restart_values = std::move(sol.restart_values);
  out.field = field;
  return out;
}

BoundSummary run_bound_any(const DeviationVector& eps,
                           const optim::SeeSawConfig& cfg, FieldMode field,
                           int direction) {
  for (double e : eps.eps)
    if (e < 0.0 || e > 1.0)
      throw ValidationError("deviation outside [0,1]");
  if (field == FieldMode::real_sym)
    return run_bound<double>(eps, cfg, field, direction);
  return run_bound<cxd>(eps, cfg, field, direction);
}

}  // namespace

BoundSummary corrected_upper_bound(const DeviationVector& eps,
                                   const optim::SeeSawConfig& cfg,
                                   FieldMode field) {
  return run_bound_any(eps, cfg, field, +1);
}

BoundSummary corrected_lower_bound(const DeviationVector& eps,
                                   const optim::SeeSawConfig& cfg,
                                   FieldMode field) {
  return run_bound_any(eps, cfg, field, -1);
}

}  // namespace eacomm::bounds
