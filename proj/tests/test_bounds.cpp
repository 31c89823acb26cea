#include "eacomm/bounds.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

using namespace eacomm;
using namespace eacomm::bounds;

namespace {

optim::SeeSawConfig quick_cfg(int restarts = 40) {
  optim::SeeSawConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = 0;
  cfg.tol = 1e-9;
  return cfg;
}

}  // namespace

TEST_CASE("deviations from rates, clamping and inflation") {
  DiscriminationRates r;
  r.r = {0.999, 0.9994, 0.9987, 1.0, 0.9977};
  r.sigma = {1e-4, 1e-4, 1e-4, 1e-4, 4e-4};
  auto d = deviations_from_rates(r);
  CHECK(std::abs(d.eps[0] - (2.0 - 0.999 - 0.9977)) < 1e-15);
  CHECK_FALSE(d.inflated);
  CHECK_FALSE(d.clamped_negative);

  // r_x + r_5 > 2 must clamp at zero and flag it
  DiscriminationRates perfect;
  perfect.r = {1.0, 1.0, 1.0, 1.0, 1.0};
  perfect.sigma = {0, 0, 0, 0, 0};
  auto dp = deviations_from_rates(perfect);
  for (double e : dp.eps) CHECK(e == 0.0);

  auto infl = inflate(d, {1e-4, 1e-4, 1e-4, 1e-4}, 4e-4, 5.0);
  CHECK(infl.inflated);
  CHECK(infl.k == 5.0);
  double pad = 5.0 * std::hypot(1e-4, 4e-4);
  CHECK(std::abs(infl.eps[0] - (d.eps[0] + pad)) < 1e-15);
  // k = 0 keeps the raw deviations
  auto same = inflate(d, {1e-4, 1e-4, 1e-4, 1e-4}, 4e-4, 0.0);
  for (int x = 0; x < 4; ++x) CHECK(same.eps[x] == d.eps[x]);

  DiscriminationRates bad;
  bad.r = {1.2, 0.9, 0.9, 0.9, 0.9};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("bundled deviations match the reference inflated vector") {
  auto eps = bundled_deviations();
  CHECK(eps.inflated);
  CHECK(eps.k == 5.0);
  const double target[4] = {0.0054, 0.0049, 0.0056, 0.0050};
  for (int x = 0; x < 4; ++x)
    CHECK(std::abs(eps.eps[x] - target[x]) <= 1e-4);
}

TEST_CASE("rates JSON parsing") {
  auto r = parse_rates(
      R"({"r": [0.1, 0.2, 0.3, 0.4, 0.5], "sigma": [0, 0, 0, 0, 0.001]})");
  CHECK(r.r[4] == 0.5);
  CHECK(r.sigma[4] == 0.001);
  CHECK_THROWS_AS(parse_rates("{}"), ValidationError);
  CHECK_THROWS_AS(parse_rates(R"({"r": [0.1, 0.2]})"), ValidationError);
  CHECK_THROWS_AS(parse_rates("not json"), ValidationError);
}

TEST_CASE("bundled rates file matches the embedded values") {
  std::ifstream in(std::string(EACOMM_DATA_DIR) + "/discrimination_rates.json",
                   std::ios::binary);
  REQUIRE(bool(in));
  std::stringstream ss;
  ss << in.rdbuf();
  auto file = parse_rates(ss.str());
  auto embedded = bundled_rates();
  for (int x = 0; x < 5; ++x) {
    CHECK(file.r[x] == embedded.r[x]);
    CHECK(file.sigma[x] == embedded.sigma[x]);
  }
}

TEST_CASE("field mode round trip") {
  CHECK(field_from_string("real") == FieldMode::real_sym);
  CHECK(field_from_string("complex") == FieldMode::complex_herm);
  CHECK(to_string(FieldMode::complex_herm) == "complex");
  CHECK_THROWS_AS(field_from_string("quaternion"), ValidationError);
}

TEST_CASE("zero deviation recovers the qubit-entanglement value") {
  DeviationVector zero;
  auto up = corrected_upper_bound(zero, quick_cfg());
  CHECK(std::abs(up.value - (5.0 + std::sqrt(5.0)) / 8.0) < 1e-3);
  CHECK(up.restart_values.size() == 40);
  CHECK(up.converged);
}

TEST_CASE("upper and lower bounds are symmetric about 1/2") {
  auto eps = bundled_deviations();
  auto up = corrected_upper_bound(eps, quick_cfg());
  auto lo = corrected_lower_bound(eps, quick_cfg());
  CHECK(up.value + lo.value == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(lo.value < 0.5);
  CHECK(up.value > 0.5);
}

TEST_CASE("upper bound grows with the deviation budget") {
  DeviationVector zero;
  auto eps = bundled_deviations();
  DeviationVector big = eps;
  for (auto& e : big.eps) e *= 2.0;
  double v0 = corrected_upper_bound(zero, quick_cfg(24)).value;
  double v1 = corrected_upper_bound(eps, quick_cfg(24)).value;
  double v2 = corrected_upper_bound(big, quick_cfg(24)).value;
  CHECK(v1 >= v0 - 1e-6);
  CHECK(v2 >= v1 - 1e-6);
}

TEST_CASE("real and complex fields agree at zero deviation") {
  DeviationVector zero;
  double re = corrected_upper_bound(zero, quick_cfg(24), FieldMode::real_sym)
                  .value;
  double co = corrected_upper_bound(zero, quick_cfg(24), FieldMode::complex_herm)
                  .value;
  CHECK(std::abs(re - co) < 1e-3);
}

TEST_CASE("invalid deviations are rejected") {
  DeviationVector bad;
  bad.eps = {-0.1, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(corrected_upper_bound(bad, quick_cfg(2)), ValidationError);
  DeviationVector huge;
  huge.eps = {1.5, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(corrected_upper_bound(huge, quick_cfg(2)), ValidationError);
}
