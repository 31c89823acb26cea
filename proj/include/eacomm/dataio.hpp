#pragma once
// Measured-correlation ingestion and reporting: the bundled correlation
// fixture, CSV/JSON table parsing with cell-level diagnostics, outcome
// binning, discrimination-rate extraction, and versioned report emission.

#include "eacomm/bounds.hpp"
#include "eacomm/protocol.hpp"
#include "eacomm/stats.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <string>

namespace eacomm::dataio {

inline constexpr const char* kReportSchema = "eacomm-report/1";

extern const std::array<std::string, 3> kMeasurementLabels;  // M1, M2, MP
extern const std::array<std::string, 5> kEncodingLabels;     // U1..U5

struct ExperimentTable {
  // p[y][x][k]: measurement y, encoding x, projector column k
  std::array<std::array<std::array<double, 8>, 5>, 3> p{};
  std::string source;
  void validate() const;  // entries in [0,1], row sums 1 +/- 0.01
};

// Bundled fixture: the reference correlation table.  One cell (M1, U2,
// column 6) is printed inconsistently in the source (its row would sum to
// 1.09); the fixture carries the value implied by row normalization and the
// ideal projector overlaps, and the CLI report records the substitution.
ExperimentTable measured_correlations();
std::string default_table_path();  // bundled CSV copy under data/

// CSV (header: measurement,encoding,p1..p8) or JSON
// {"measurements": {"M1": {"U1": [8 floats], ...}}}; errors carry the
// offending measurement/encoding/cell.
ExperimentTable parse_table(const std::string& path);
ExperimentTable parse_table_text(const std::string& text,
                                 const std::string& source_name);
std::string table_to_csv(const ExperimentTable& t);

// Class sums for the scored part (encodings U1..U4, first two measurements);
// zero-class mass is dropped (counts as failure downstream).
protocol::CorrelationTable bin_outcomes(
    const ExperimentTable& t,
    const protocol::BinningSpec& spec = protocol::default_binning());

// r_x = non-flag mass of the flag measurement for U1..U4, r_5 = flag mass
// for U5; sigmas are not derivable from the table and are left zero.
bounds::DiscriminationRates discrimination_rates(
    const ExperimentTable& t,
    const protocol::BinningSpec& spec = protocol::default_binning());

// Integer counts at the stated rounds-per-cell resolution.
stats::CountsTable counts_from_table(const ExperimentTable& t,
                                     long rounds_per_cell = 20000);
stats::CountsTable parse_counts(const std::string& json_text);
std::string counts_to_json(const stats::CountsTable& c);

// Outcome asymmetry Delta P = p(b=0) - p(b=1) per (measurement, encoding);
// for the flag measurement b=0 is the non-flag class.
struct DeltaRow {
  std::string measurement;
  std::string encoding;
  double delta = 0.0;
};
std::vector<DeltaRow> outcome_deltas(
    const ExperimentTable& t,
    const protocol::BinningSpec& spec = protocol::default_binning());

struct ReportBundle {
  nlohmann::json config;       // seeds, tolerances, paths, field mode
  nlohmann::json results;      // numeric outputs, full precision
  nlohmann::json conventions;  // recorded convention choices / assumptions
  std::vector<DeltaRow> deltas;
};

// Writes <json_path> (schema eacomm-report/1) and, when deltas are present,
// the plotting series <csv_path>; identical bundles produce identical bytes.
void emit_report(const ReportBundle& b, const std::string& json_path,
                 const std::string& csv_path = "");
nlohmann::json parse_report(const std::string& path);

}  // namespace eacomm::dataio
