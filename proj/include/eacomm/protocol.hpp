#pragma once
// The entanglement-assisted RAC + flag-discrimination protocol: shared state,
// the five compression encodings, effective states tau_x on (A2,B1,B2), the
// eigenspace-constructed decoding measurements, reference success values, and
// the reference measurement constants used as test oracles.

#include "eacomm/qcore.hpp"

#include <array>
#include <utility>

namespace eacomm::protocol {

// Scored task: b must equal bit y of the pair x = (x1,x2), uniform prior
// 1/8 over the 8 scored (x,y) cells, payoff c = prior * success indicator.
struct TaskSpec {
  double c[2][4][2] = {};       // score tensor [b][x-pair, lexicographic][y]
  double prior = 1.0 / 8.0;     // p(x,y) per scored cell
  double score_ratio_max() const;  // max_{bxy} c_{bxy}/p(x,y)
};
TaskSpec rac_task();

// Bijection from the four compression encodings to bit pairs; the fifth
// encoding is always the flag.
struct InputAssignment {
  std::array<std::pair<int, int>, 4> bits;  // encoding k -> (x1, x2)
  static InputAssignment identity();        // lexicographic: U1->(0,0) ... U4->(1,1)
};

// p(b|encoding,y) for y in {0,1} (first/second decoding measurement) and
// b in {0,1}; rows may be subnormalized (zero-space mass counts as failure).
struct CorrelationTable {
  double p[4][2][2] = {};  // [encoding 0..3][y][b]
};

struct ProtocolStates {
  std::array<qcore::DensityOperator, 5> tau;  // dim 8, subsystems (A2,B1,B2)
};

struct OptimalMeasurements {
  MatC m1, m2;          // +1/0/-1 observables (8x8)
  qcore::SignSpaces s1, s2;
  MatC flag;            // rank-2 projector onto support(tau_5)
};

struct ReferenceBounds {
  double no_entanglement;       // 1/2
  double dense_coding;          // 7/8
  double qubit_entanglement;    // (5+sqrt 5)/8
  double four_dim_entanglement; // (6+sqrt 2)/8
};

// Outcome-class partition of the 8 rank-1 projectors per measurement, in the
// reference column order (0-based).
struct BinningSpec {
  std::array<int, 3> neg = {0, 1, 2};   // b=1 class for the first two measurements
  std::array<int, 2> zero = {3, 4};     // failure class
  std::array<int, 3> pos = {5, 6, 7};   // b=0 class
  std::array<int, 2> flag = {3, 4};     // flag class for the third measurement
};
BinningSpec default_binning();

qcore::DensityOperator shared_state();                       // dim 16: A1,A2,B1,B2
std::array<qcore::UnitaryOperator, 5> encoding_unitaries();  // on A1A2
qcore::DensityOperator encode(int x);                        // tau_x, x in 1..5
ProtocolStates protocol_states();

// Sign-observable construction under the recorded conventions (right-to-left
// operator products, lexicographic encoding -> bit-pair map, basis (A2,B1,B2)).
OptimalMeasurements optimal_measurements(const ProtocolStates& st,
                                         const TaskSpec& task = rac_task());

ReferenceBounds reference_bounds();

// Ideal Born-rule correlations under the sign-observable measurements.
CorrelationTable simulate_ideal(const ProtocolStates& st,
                                const OptimalMeasurements& meas);

double prac(const CorrelationTable& corr, const InputAssignment& assignment);

// Brute force over the 24 encoding <-> bit-pair bijections against the ideal
// correlations; returns the unique maximizer.
InputAssignment assign_inputs(const ProtocolStates& st,
                              const OptimalMeasurements& meas);

// Reference decoding-measurement constants (4-decimal entries; exact 1/sqrt2
// components), used as reconstruction oracles.
struct MeasurementFixtures {
  MatR m1, m2;                       // 8x8 observables
  std::array<VecR, 8> m1_eigvecs;    // eigenvalue order (-1,-1,-1,0,0,1,1,1)
  std::array<VecR, 8> m2_eigvecs;
  std::array<VecR, 8> mp_vecs;       // rank-1 projector list, third measurement
};
MeasurementFixtures reference_measurement_fixtures();

}  // namespace eacomm::protocol
