#include "eacomm/dataio.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace eacomm;
using namespace eacomm::dataio;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool tables_equal(const ExperimentTable& a, const ExperimentTable& b,
                  double tol = 0.0) {
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x)
      for (int k = 0; k < 8; ++k)
        if (std::abs(a.p[y][x][k] - b.p[y][x][k]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("bundled fixture shape and spot values") {
  auto t = measured_correlations();
  CHECK(t.p[0][0][5] == 0.3209);  // (M1, U1, p6)
  CHECK(t.p[2][4][3] == 0.5110);  // (MP, U5, p4)
  CHECK(t.p[1][4][4] == 0.5120);  // (M2, U5, p5)
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) {
      double sum = 0.0;
      for (int k = 0; k < 8; ++k) sum += t.p[y][x][k];
      CHECK(std::abs(sum - 1.0) <= 0.01 + 1e-9);
    }
}

TEST_CASE("bundled CSV file parses to the embedded fixture") {
  auto from_file = parse_table(default_table_path());
  CHECK(tables_equal(from_file, measured_correlations()));
}

TEST_CASE("binning sums classes and preserves row mass") {
  auto t = measured_correlations();
  auto corr = bin_outcomes(t);
  // (M1, U1) positive class = 0.3209 + 0.1696 + 0.4264
  CHECK(corr.p[0][0][0] == doctest::Approx(0.9169).epsilon(1e-12));
  // class sums never exceed the row sum
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 2; ++y) {
      double row = 0.0;
      for (int k = 0; k < 8; ++k) row += t.p[y][x][k];
      double zero = 0.0;
      for (int k : protocol::default_binning().zero) zero += t.p[y][x][k];
      CHECK(corr.p[x][y][0] + corr.p[x][y][1] + zero ==
            doctest::Approx(row).epsilon(1e-12));
    }
}

TEST_CASE("discrimination rates from the fixture") {
  auto rates = discrimination_rates(measured_correlations());
  // (MP, U5) flag class: 0.5110 + 0.4867
  CHECK(rates.r[4] == doctest::Approx(0.9977).epsilon(1e-12));
  const double printed[5] = {0.9990, 0.9994, 0.9987, 0.9993, 0.9977};
  for (int x = 0; x < 5; ++x)
    CHECK(std::abs(rates.r[x] - printed[x]) <= 2e-4 + 1e-12);
}

TEST_CASE("CSV and JSON round trips") {
  auto t = measured_correlations();
  auto back = parse_table_text(table_to_csv(t), "roundtrip.csv");
  CHECK(tables_equal(back, t));
  // parse-emit-parse is idempotent byte-for-byte
  CHECK(table_to_csv(back) == table_to_csv(t));

  nlohmann::json j;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) {
      auto row = nlohmann::json::array();
      for (int k = 0; k < 8; ++k) row.push_back(t.p[y][x][k]);
      j["measurements"][kMeasurementLabels[y]][kEncodingLabels[x]] = row;
    }
  auto from_json = parse_table_text(j.dump(), "roundtrip.json");
  CHECK(tables_equal(from_json, t));
}

TEST_CASE("parse errors carry cell locations") {
  auto t = measured_correlations();
  std::string csv = table_to_csv(t);

  // drop the last line -> missing row named
  std::string truncated = csv.substr(0, csv.rfind("MP,U5"));
  CHECK_THROWS_WITH_AS(parse_table_text(truncated, "t.csv"),
                       doctest::Contains("(MP,U5)"), ValidationError);

  // corrupt one number -> cell named
  std::string bad = csv;
  bad.replace(bad.find("0.3209"), 6, "oops!!");
  CHECK_THROWS_WITH_AS(parse_table_text(bad, "t.csv"),
                       doctest::Contains("(M1,U1,p6)"), ValidationError);

  // break normalization -> row named
  std::string heavy = csv;
  heavy.replace(heavy.find("0.3209"), 6, "0.9209");
  CHECK_THROWS_WITH_AS(parse_table_text(heavy, "t.csv"),
                       doctest::Contains("(M1,U1)"), ValidationError);

  CHECK_THROWS_AS(parse_table("/nonexistent/table.csv"), ValidationError);
  CHECK_THROWS_AS(parse_table_text("measurement,encoding,p1\n", "h.csv"),
                  ValidationError);
}

TEST_CASE("counts conversion and JSON round trip") {
  auto t = measured_correlations();
  auto c = counts_from_table(t);
  CHECK(c.rounds_per_cell == 20000);
  CHECK(c.counts[0][0][5] == 6418);  // round(0.3209 * 2e4)
  CHECK(c.counts[2][4][3] == 10220);

  auto back = parse_counts(counts_to_json(c));
  CHECK(back.counts == c.counts);
  CHECK(back.rounds_per_cell == c.rounds_per_cell);
  CHECK_THROWS_AS(parse_counts("{}"), ValidationError);
  CHECK_THROWS_AS(counts_from_table(t, 0), ValidationError);
}

TEST_CASE("outcome deltas cover all 15 cells with the right signs") {
  auto rows = outcome_deltas(measured_correlations());
  REQUIRE(rows.size() == 15);
  CHECK(rows[0].measurement == "M1");
  CHECK(rows[0].encoding == "U1");
  CHECK(rows[0].delta == doctest::Approx(0.9169 - 0.0829).epsilon(1e-9));
  // flag measurement: U5 lands in the flag class, others in the complement
  for (const auto& r : rows) {
    if (r.measurement != "MP") continue;
    if (r.encoding == "U5")
      CHECK(r.delta < -0.99);
    else
      CHECK(r.delta > 0.99);
  }
}

TEST_CASE("reports: schema, determinism, round trip") {
  ReportBundle b;
  b.config = {{"command", "test"}, {"seed", 7}};
  b.results = {{"value", 0.123456789012345}};
  b.conventions = {{"note", "test"}};
  b.deltas = outcome_deltas(measured_correlations());

  std::string jpath = "test_report_tmp.json";
  std::string cpath = "test_report_tmp.csv";
  emit_report(b, jpath, cpath);
  auto j = parse_report(jpath);
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["results"]["value"].get<double>() == 0.123456789012345);
  CHECK(j["delta_p"].size() == 15);

  std::string first = slurp(jpath);
  emit_report(b, jpath, cpath);
  CHECK(slurp(jpath) == first);

  std::string csv = slurp(cpath);
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 16);  // header + 15 rows

  // a report missing the schema tag is rejected
  std::ofstream out(jpath, std::ios::binary);
  out << "{\"results\": {}}\n";
  out.close();
  CHECK_THROWS_AS(parse_report(jpath), ValidationError);
  std::remove(jpath.c_str());
  std::remove(cpath.c_str());
}
