#include "eacomm/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eacomm::dataio {

const std::array<std::string, 3> kMeasurementLabels = {"M1", "M2", "MP"};
const std::array<std::string, 5> kEncodingLabels = {"U1", "U2", "U3", "U4",
                                                   "U5"};

namespace {

// Reference correlation table; (M1, U2, column 6) repaired from an
// inconsistent print (see header note).
constexpr double kM1[5][8] = {
    {0.0498, 0.0194, 0.0137, 0.0000, 0.0001, 0.3209, 0.1696, 0.4264},
    {0.0462, 0.0229, 0.0101, 0.0001, 0.0006, 0.2000, 0.3493, 0.3608},
    {0.4303, 0.4460, 0.0394, 0.0006, 0.0013, 0.0115, 0.0094, 0.0615},
    {0.2816, 0.1426, 0.4764, 0.0002, 0.0000, 0.0064, 0.0060, 0.0868},
    {0.0039, 0.0011, 0.0001, 0.4997, 0.4915, 0.0009, 0.0025, 0.0001}};
constexpr double kM2[5][8] = {
    {0.0453, 0.0039, 0.0294, 0.0001, 0.0000, 0.0002, 0.4958, 0.4253},
    {0.2582, 0.4899, 0.1758, 0.0006, 0.0001, 0.0001, 0.0004, 0.0747},
    {0.0485, 0.0005, 0.0335, 0.0010, 0.0005, 0.5048, 0.0006, 0.4105},
    {0.4499, 0.0023, 0.4658, 0.0000, 0.0001, 0.0002, 0.0022, 0.0794},
    {0.0002, 0.0005, 0.0000, 0.4865, 0.5120, 0.0004, 0.0000, 0.0001}};
constexpr double kMP[5][8] = {
    {0.0006, 0.5025, 0.0004, 0.0003, 0.0006, 0.0012, 0.4938, 0.0005},
    {0.0001, 0.1252, 0.5096, 0.0005, 0.0001, 0.1247, 0.1203, 0.1194},
    {0.5039, 0.1188, 0.0002, 0.0002, 0.0009, 0.1212, 0.1268, 0.1280},
    {0.0001, 0.0011, 0.0006, 0.0006, 0.0001, 0.5114, 0.0010, 0.4850},
    {0.0007, 0.0001, 0.0011, 0.5110, 0.4867, 0.0001, 0.0000, 0.0002}};

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int measurement_index(const std::string& s) {
  for (int y = 0; y < 3; ++y)
    if (s == kMeasurementLabels[y]) return y;
  return -1;
}

int encoding_index(const std::string& s) {
  for (int x = 0; x < 5; ++x)
    if (s == kEncodingLabels[x]) return x;
  return -1;
}

std::string cell_name(int y, int x, int k) {
  return "(" + kMeasurementLabels[y] + "," + kEncodingLabels[x] + ",p" +
         std::to_string(k + 1) + ")";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    size_t a = field.find_first_not_of(" \t\r");
    size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return out;
}

ExperimentTable parse_table_csv(const std::string& text,
                                const std::string& src) {
  ExperimentTable t;
  t.source = src;
  bool seen[3][5] = {};
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  bool header_done = false;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    auto f = split_csv(line);
    if (!header_done) {
      if (f.size() != 10 || f[0] != "measurement" || f[1] != "encoding")
        throw ValidationError(src + ":" + std::to_string(lineno) +
                              ": expected header measurement,encoding,p1..p8");
      header_done = true;
      continue;
    }
    if (f.size() != 10)
      throw ValidationError(src + ":" + std::to_string(lineno) + ": expected " +
                            "10 fields, got " + std::to_string(f.size()));
    int y = measurement_index(f[0]);
    int x = encoding_index(f[1]);
    if (y < 0 || x < 0)
      throw ValidationError(src + ":" + std::to_string(lineno) +
                            ": unknown row label (" + f[0] + "," + f[1] + ")");
    if (seen[y][x])
      throw ValidationError(src + ": duplicate row (" + f[0] + "," + f[1] +
                            ")");
    seen[y][x] = true;
    for (int k = 0; k < 8; ++k) {
      try {
        size_t pos = 0;
        t.p[y][x][k] = std::stod(f[2 + k], &pos);
        if (pos != f[2 + k].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError(src + ": cell " + cell_name(y, x, k) +
                              " is not a number: '" + f[2 + k] + "'");
      }
    }
  }
  if (!header_done) throw ValidationError(src + ": empty table");
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x)
      if (!seen[y][x])
        throw ValidationError(src + ": missing row (" + kMeasurementLabels[y] +
                              "," + kEncodingLabels[x] + ")");
  t.validate();
  return t;
}

ExperimentTable parse_table_json(const std::string& text,
                                 const std::string& src) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(src + ": invalid JSON: " + e.what());
  }
  if (!j.contains("measurements") || !j["measurements"].is_object())
    throw ValidationError(src + ": missing 'measurements' object");
  ExperimentTable t;
  t.source = src;
  const auto& m = j["measurements"];
  for (int y = 0; y < 3; ++y) {
    if (!m.contains(kMeasurementLabels[y]))
      throw ValidationError(src + ": missing measurement " +
                            kMeasurementLabels[y]);
    const auto& block = m[kMeasurementLabels[y]];
    for (int x = 0; x < 5; ++x) {
      if (!block.contains(kEncodingLabels[x]))
        throw ValidationError(src + ": missing row (" + kMeasurementLabels[y] +
                              "," + kEncodingLabels[x] + ")");
      const auto& row = block[kEncodingLabels[x]];
      if (!row.is_array() || row.size() != 8)
        throw ValidationError(src + ": row (" + kMeasurementLabels[y] + "," +
                              kEncodingLabels[x] + ") must be 8 numbers");
      for (int k = 0; k < 8; ++k) {
        if (!row[k].is_number())
          throw ValidationError(src + ": cell " + cell_name(y, x, k) +
                                " is not a number");
        t.p[y][x][k] = row[k].get<double>();
      }
    }
  }
  t.validate();
  return t;
}

}  // namespace

void ExperimentTable::validate() const {
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) {
      double sum = 0.0;
      for (int k = 0; k < 8; ++k) {
        double v = p[y][x][k];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
          throw ValidationError(source + ": cell " + cell_name(y, x, k) +
                                " = " + fmt_double(v) + " outside [0,1]");
        sum += v;
      }
      // table entries are rounded to 4 decimals, so allow 1% slack
      if (std::abs(sum - 1.0) > 0.01 + 1e-9)
        throw ValidationError(source + ": row (" + kMeasurementLabels[y] + "," +
                              kEncodingLabels[x] + ") sums to " +
                              fmt_double(sum) + ", expected 1 +/- 0.01");
    }
}

ExperimentTable measured_correlations() {
  ExperimentTable t;
  t.source = "bundled measured_correlations fixture";
  for (int x = 0; x < 5; ++x)
    for (int k = 0; k < 8; ++k) {
      t.p[0][x][k] = kM1[x][k];
      t.p[1][x][k] = kM2[x][k];
      t.p[2][x][k] = kMP[x][k];
    }
  t.validate();
  return t;
}

std::string default_table_path() {
#ifdef EACOMM_DATA_DIR
  return std::string(EACOMM_DATA_DIR) + "/measured_correlations.csv";
#else
  return "data/measured_correlations.csv";
#endif
}

ExperimentTable parse_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open table file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table_text(buf.str(), path);
}

ExperimentTable parse_table_text(const std::string& text,
                                 const std::string& source_name) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return parse_table_json(text, source_name);
  return parse_table_csv(text, source_name);
}

std::string table_to_csv(const ExperimentTable& t) {
  std::string out = "measurement,encoding,p1,p2,p3,p4,p5,p6,p7,p8\n";
  char buf[32];
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) {
      out += kMeasurementLabels[y] + "," + kEncodingLabels[x];
      for (int k = 0; k < 8; ++k) {
        std::snprintf(buf, sizeof(buf), ",%.4f", t.p[y][x][k]);
        out += buf;
      }
      out += "\n";
    }
  return out;
}

protocol::CorrelationTable bin_outcomes(const ExperimentTable& t,
                                        const protocol::BinningSpec& spec) {
  protocol::CorrelationTable corr;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 2; ++y) {
      double pos = 0.0, neg = 0.0;
      for (int k : spec.pos) pos += t.p[y][x][k];
      for (int k : spec.neg) neg += t.p[y][x][k];
      corr.p[x][y][0] = pos;
      corr.p[x][y][1] = neg;
    }
  return corr;
}

bounds::DiscriminationRates discrimination_rates(
    const ExperimentTable& t, const protocol::BinningSpec& spec) {
  bounds::DiscriminationRates rates;
  auto flagged = [&](int x) {
    double f = 0.0;
    for (int k : spec.flag) f += t.p[2][x][k];
    return f;
  };
  // raw class mass, not row-normalized: the table rows already sum to 1 up
  // to rounding, and the reference rates match the raw sums
  for (int x = 0; x < 4; ++x) {
    double total = 0.0;
    for (int k = 0; k < 8; ++k) total += t.p[2][x][k];
    rates.r[x] = total - flagged(x);
  }
  rates.r[4] = flagged(4);
  for (int x = 0; x < 5; ++x) rates.sigma[x] = 0.0;
  rates.validate();
  return rates;
}

stats::CountsTable counts_from_table(const ExperimentTable& t,
                                     long rounds_per_cell) {
  if (rounds_per_cell < 1)
    throw ValidationError("rounds_per_cell must be positive");
  stats::CountsTable c;
  c.rounds_per_cell = rounds_per_cell;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x)
      for (int k = 0; k < 8; ++k)
        c.counts[y][x][k] =
            std::llround(t.p[y][x][k] * static_cast<double>(rounds_per_cell));
  c.validate();
  return c;
}

stats::CountsTable parse_counts(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid counts JSON: ") + e.what());
  }
  if (!j.contains("measurements") || !j["measurements"].is_object())
    throw ValidationError("counts JSON: missing 'measurements' object");
  stats::CountsTable c;
  c.rounds_per_cell = j.value("rounds_per_cell", 0L);
  const auto& m = j["measurements"];
  for (int y = 0; y < 3; ++y) {
    if (!m.contains(kMeasurementLabels[y]))
      throw ValidationError("counts JSON: missing measurement " +
                            kMeasurementLabels[y]);
    const auto& block = m[kMeasurementLabels[y]];
    for (int x = 0; x < 5; ++x) {
      if (!block.contains(kEncodingLabels[x]))
        throw ValidationError("counts JSON: missing row (" +
                              kMeasurementLabels[y] + "," + kEncodingLabels[x] +
                              ")");
      const auto& row = block[kEncodingLabels[x]];
      if (!row.is_array() || row.size() != 8)
        throw ValidationError("counts JSON: row (" + kMeasurementLabels[y] +
                              "," + kEncodingLabels[x] + ") must be 8 counts");
      for (int k = 0; k < 8; ++k) {
        if (!row[k].is_number_integer() || row[k].get<long>() < 0)
          throw ValidationError("counts JSON: cell " + cell_name(y, x, k) +
                                " must be a nonneg integer");
        c.counts[y][x][k] = row[k].get<long>();
      }
    }
  }
  if (c.rounds_per_cell == 0) {
    long mx = 0;
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 5; ++x) {
        long s = 0;
        for (int k = 0; k < 8; ++k) s += c.counts[y][x][k];
        mx = std::max(mx, s);
      }
    c.rounds_per_cell = mx;
  }
  c.validate();
  return c;
}

std::string counts_to_json(const stats::CountsTable& c) {
  nlohmann::json j;
  j["rounds_per_cell"] = c.rounds_per_cell;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) {
      auto row = nlohmann::json::array();
      for (int k = 0; k < 8; ++k) row.push_back(c.counts[y][x][k]);
      j["measurements"][kMeasurementLabels[y]][kEncodingLabels[x]] = row;
    }
  return j.dump(2) + "\n";
}

std::vector<DeltaRow> outcome_deltas(const ExperimentTable& t,
                                     const protocol::BinningSpec& spec) {
  std::vector<DeltaRow> rows;
  rows.reserve(15);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) {
      double p0 = 0.0, p1 = 0.0;
      if (y < 2) {
        for (int k : spec.pos) p0 += t.p[y][x][k];
        for (int k : spec.neg) p1 += t.p[y][x][k];
      } else {
        for (int k : spec.flag) p1 += t.p[y][x][k];
        for (int k = 0; k < 8; ++k) p0 += t.p[y][x][k];
        p0 -= p1;
      }
      rows.push_back({kMeasurementLabels[y], kEncodingLabels[x], p0 - p1});
    }
  return rows;
}

void emit_report(const ReportBundle& b, const std::string& json_path,
                 const std::string& csv_path) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["config"] = b.config.is_null() ? nlohmann::json::object() : b.config;
  j["results"] = b.results.is_null() ? nlohmann::json::object() : b.results;
  if (!b.conventions.is_null()) j["conventions"] = b.conventions;
  if (!b.deltas.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& d : b.deltas)
      arr.push_back({{"measurement", d.measurement},
                     {"encoding", d.encoding},
                     {"delta_p", d.delta}});
    j["delta_p"] = arr;
  }
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write report: " + json_path);
    out << j.dump(2) << "\n";
  }
  if (!csv_path.empty() && !b.deltas.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write series: " + csv_path);
    out << "measurement,encoding,delta_p\n";
    for (const auto& d : b.deltas)
      out << d.measurement << "," << d.encoding << "," << fmt_double(d.delta)
          << "\n";
  }
}

nlohmann::json parse_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open report: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  if (!j.contains("schema") || j["schema"] != kReportSchema)
    throw ValidationError(path + ": missing or unsupported schema tag");
  return j;
}

}  // namespace eacomm::dataio
