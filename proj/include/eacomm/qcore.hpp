#pragma once
// Finite-dimensional quantum linear algebra: validated state/channel/POVM
// types, tensor and partial-trace machinery, Born rule, and spectral helpers.
// Everything is dense complex double precision; dimensions never exceed 16.

#include "eacomm/common.hpp"

#include <array>
#include <utility>

namespace eacomm::qcore {

inline MatC dag(const MatC& a) { return a.adjoint(); }
inline MatC hermitize(const MatC& a) { return 0.5 * (a + a.adjoint()); }
bool is_hermitian(const MatC& a, double tol = 1e-12);

// --- validated value types ------------------------------------------------

struct DensityOperator {
  MatC rho;
  std::vector<int> dims;  // subsystem dims; product == rho.rows()
  DensityOperator(MatC m, std::vector<int> subsystem_dims);
  int dim() const { return int(rho.rows()); }
};

struct UnitaryOperator {
  MatC u;
  explicit UnitaryOperator(MatC m);
  int dim() const { return int(u.rows()); }
};

struct ChannelSpec {
  int in_dim = 0, out_dim = 0;
  std::vector<MatC> kraus;
  ChannelSpec(int in, int out, std::vector<MatC> ops);
};

struct Povm {
  std::vector<MatC> effects;
  explicit Povm(std::vector<MatC> ops);
  int dim() const { return int(effects.front().rows()); }
  int outcomes() const { return int(effects.size()); }
};

// --- construction helpers -------------------------------------------------

VecC ket(int dim, int index);
MatC pauli_x();
MatC pauli_y();
MatC pauli_z();
MatC cnot(int control);          // 4x4 two-qubit gate, control in {1,2}
VecC phi_plus(int d);            // (1/sqrt d) sum_i |ii>, dim d^2

MatC tensor(const std::vector<MatC>& factors);
VecC tensor_kets(const std::vector<VecC>& factors);

// Reorder tensor factors of a ket: perm[k] = source slot of output slot k.
VecC permute_ket(const VecC& v, const std::vector<int>& perm,
                 const std::vector<int>& dims);

// --- core operations ------------------------------------------------------

DensityOperator partial_trace(const DensityOperator& op,
                              const std::vector<int>& keep);

DensityOperator apply_channel(const ChannelSpec& ch, const DensityOperator& rho,
                              int on_subsystem);

VecR born(const DensityOperator& rho, const Povm& m);

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues, orthonormal
// columns, deterministic phase (largest-magnitude component real positive).
std::pair<VecR, MatC> eig_herm(const MatC& a);

struct SignSpaces {
  MatC pos, neg, zero;  // orthogonal projectors, pos+neg+zero = I
  int rank_pos = 0, rank_neg = 0, rank_zero = 0;
};
SignSpaces sign_observable(const MatC& a, double zero_tol = 1e-7);

double trace_norm(const MatC& a);
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
// Tr rho0 (log2 rho0 - log2 rho); throws DivergenceError on support violation.
double relative_entropy(const DensityOperator& rho0, const DensityOperator& rho);

MatC choi(const ChannelSpec& ch);

}  // namespace eacomm::qcore
