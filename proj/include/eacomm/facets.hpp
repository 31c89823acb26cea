#pragma once
// Facet inequalities for the 6-input/4-message/6-outcome communication
// scenario: classical bounds by exhaustive deterministic-strategy enumeration
// (OpenMP kernel + serial reference), entanglement-assisted quantum lower
// bounds by see-saw over channel isometries and POVMs, and the rotation/CNOT
// circuit template with exact per-angle updates.

#include "eacomm/optim.hpp"
#include "eacomm/qcore.hpp"

#include <array>
#include <string>

namespace eacomm::facets {

struct FacetInequality {
  MatR c;         // 6x6, rows indexed by outcome b, columns by input x
  double cbound;  // known classical bound C
  std::string label;
};

std::array<FacetInequality, 3> builtin_facets();

// JSON form {"c": [[6x6]], "classical_bound": optional float, "label": string}
FacetInequality parse_facet(const std::string& json_text);
std::string facet_to_json(const FacetInequality& f);

// --- classical bounds -------------------------------------------------------

struct ClassicalSolution {
  double value = 0.0;
  std::array<int, 6> encoding{};  // input x -> message
  std::vector<int> decoding;      // message -> outcome
};

// Exhaustive max over encodings {x}->{d} and decodings {d}->{b} of
// sum_x c[g(e(x))][x]; shared randomness cannot beat this by linearity.
ClassicalSolution classical_bound(const FacetInequality& f, int message_dim = 4);
ClassicalSolution classical_bound_serial(const FacetInequality& f,
                                         int message_dim = 4);

// --- quantum lower bounds ---------------------------------------------------

struct FacetStrategy {
  int ent_dim = 0;
  VecC shared;                     // |phi> on C^d (x) C^d, Alice-major layout
  std::array<MatC, 6> isometry;    // V_x: (2*anc) x d, anc = d
  std::vector<MatC> povm;          // 6 effects on dim 2*d
};

struct QuantumOptions {
  bool optimize_state = false;  // opt-in shared-state top-eigenvector step
  int povm_iters = 60;          // fixed-point iterations per measurement step
  int stiefel_steps = 60;       // ascent steps per channel step
};

// See-saw lower bound on the facet value with ent_dim-dimensional shared
// entanglement and a qubit message; every reported value is achievable.
optim::CertifiedSolution<FacetStrategy> quantum_lower_bound(
    const FacetInequality& f, int ent_dim, const optim::SeeSawConfig& cfg,
    const QuantumOptions& opt = {});

// --- circuit template -------------------------------------------------------

qcore::UnitaryOperator rxz(double theta);  // ((cos,-sin),(sin,cos))

struct CircuitElement {
  enum class Kind { rotation, cnot } kind;
  int qubit;  // rotation target or CNOT control, 1-based
};

struct CircuitTemplate {
  std::vector<CircuitElement> seq;  // application order: front acts first
  int angle_count() const;
};

// The reference layout: three CNOT layers for the first input, two for the
// rest, rotation layers on both qubits in between; controls configurable.
CircuitTemplate input1_template(const std::array<int, 3>& controls = {1, 2, 1});
CircuitTemplate standard_template(const std::array<int, 2>& controls = {1, 2});

// Angles consumed in sequence order; unitary composed right-to-left from the
// application-ordered sequence, then qubit 1 is discarded (2 Kraus operators).
qcore::ChannelSpec circuit_channel(const CircuitTemplate& t,
                                   const std::vector<double>& theta);

struct CircuitResult {
  double value = 0.0;
  std::array<std::vector<double>, 6> angles;  // radians, per input
  int ordering = 0;                           // index into the ordering set
  int sweeps_used = 0;
  bool converged = false;
  int restart = -1;
  std::vector<double> restart_values;
};

struct CircuitOptions {
  bool product_state = false;  // ablation: two EPR pairs -> |0000>
  bool scan_orderings = false; // try every control pattern, not just default
  int povm_iters = 40;
};

// Alternate exact single-angle updates with the measurement step, restarted
// from random angles; shared state is two EPR pairs unless ablated.
CircuitResult optimize_circuit(const FacetInequality& f,
                               const optim::SeeSawConfig& cfg,
                               const CircuitOptions& opt = {});

// Reference angle table (degrees, per input) and its best-effort evaluation:
// the angles are scored literally under every admissible control pattern with
// an exactly optimized measurement, and the best (pattern, value) is reported.
std::array<std::vector<double>, 6> reference_angles_deg();
std::array<std::vector<double>, 6> parse_angles_csv(const std::string& text);
std::string angles_to_csv(const std::array<std::vector<double>, 6>& deg);

struct AngleEvaluation {
  double value = 0.0;  // achieved by the best measurement found
  double gap = 0.0;    // measurement-suboptimality bound at that ordering
  int ordering = 0;
  int orderings_tried = 0;
};
AngleEvaluation evaluate_reference_angles(
    const FacetInequality& f, const std::array<std::vector<double>, 6>& deg);

}  // namespace eacomm::facets
