#pragma once

// Constructors for the projective-output channel families and a few
// reference channels used as boundary cases.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "projchan/channel.hpp"

namespace projchan::zoo {

/// T(rho) = (1 - rho^T) / (d - 1).
struct WernerHolevo {
  std::size_t d = 3;
};

/// M(rho) = lambda rho^T + (1 - lambda) tr(rho) omega, m = 1.
struct Stretching {
  std::size_t d = 3;
  double lambda = 0.5;
  std::optional<Matrix> omega;  // pure; |0><0| when absent
};

/// M(rho) = (1/d) sum_i W_i rho^T W_i†, m = 1.
struct WeylShift {
  std::size_t d = 3;
};

/// M(rho) = sum_i P_i rho^T P_i, m = 1.
struct Pinching {
  std::size_t d = 3;
  std::vector<Matrix> projections;
};

/// T(rho) = (1/lambda) sum_k J_k rho J_k over spin-j generators, d = 2j + 1.
struct CasimirIrreducible {
  std::size_t d = 3;
};

/// The fixed d = 4 reducible example: T = (3 T' + id) / 4, m = 2.
struct CasimirReducibleExample {};

/// Entanglement-breaking shift/pinching construction with m = |K|.
struct ShiftsPinching {
  std::size_t d = 4;
  std::vector<std::size_t> K;  // subset of {1, ..., d}
};

/// M(rho) = (tr_D rho)^T (x) 1_D / D on C^n (x) C^D, m = D.
struct CoarseGraining {
  std::size_t n = 2;
  std::size_t D = 2;
};

/// Kraus operators diag(a_k).
struct Diagonal {
  std::size_t d = 2;
  std::vector<std::vector<cplx>> diagonals;
};

struct Identity {
  std::size_t d = 2;
};

/// rho -> tr(rho) 1/d.
struct CompletelyDepolarizing {
  std::size_t d = 2;
};

using ChannelSpec = std::variant<WernerHolevo, Stretching, WeylShift, Pinching, CasimirIrreducible,
                                 CasimirReducibleExample, ShiftsPinching, CoarseGraining, Diagonal, Identity,
                                 CompletelyDepolarizing>;

struct BuiltChannel {
  QuantumChannel channel;
  std::optional<ProjectiveForm> form;
};

/// Validates the spec invariants (SpecInvalid) and builds the channel with its
/// projective form where the family has one.
BuiltChannel build(const ChannelSpec& spec);

/// Short family name, e.g. "WernerHolevo".
std::string family_name(const ChannelSpec& spec);
std::size_t spec_dim(const ChannelSpec& spec);

/// Spin-j matrices (J_x, J_y, J_z) in the basis m = j, j-1, ..., -j.
std::array<Matrix, 3> su2_generators(std::size_t d);

/// The generators of the reducible 4-dimensional representation as printed.
std::array<Matrix, 3> casimir_reducible_generators();
/// Generators of the SU(2) acting on the multiplicity factor of that
/// representation (they commute with casimir_reducible_generators()).
std::array<Matrix, 3> casimir_reducible_commutant();
/// The witness input for CasimirReducibleExample.
Matrix casimir_reducible_rho0();

/// W_i |j> = |j + i mod d>.
Matrix weyl_shift(std::size_t d, std::size_t i);
/// U_j |k> = omega^{jk} |k>, omega = exp(2 pi i / d).
Matrix weyl_phase(std::size_t d, std::size_t j);
/// {omega^c X^a Z^b}: all d^3 elements of the Heisenberg group.
std::vector<Matrix> heisenberg_group(std::size_t d);

/// Diagonal projections onto consecutive blocks of the given sizes.
std::vector<Matrix> block_projections(const std::vector<std::size_t>& blocks);

/// Uniform superposition (1/sqrt d) sum_i |i>.
Vector flat_vector(std::size_t d);

}  // namespace projchan::zoo
