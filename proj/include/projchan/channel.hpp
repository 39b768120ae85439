#pragma once

// Channel representation on C^d -> C^d.
//
// Choi convention (trace one): J(T) = (T (x) id)(Omega) = (1/d) sum_ij T(|i><j|) (x) |i><j|,
// output factor first, reference second. A Kraus operator A corresponds to the
// row-major vectorisation vec(A)_{a*d+i} = A(a, i), so J = (1/d) sum_k vec(A_k) vec(A_k)†.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "projchan/linalg.hpp"
#include "projchan/state.hpp"

namespace projchan {

/// A linear (not necessarily positive) map on d x d matrices, held as its
/// Choi-like matrix in the channel convention.
class LinearMap {
 public:
  LinearMap() = default;
  static LinearMap from_choi(std::size_t d, Matrix choi);
  static LinearMap from_action(std::size_t d, const std::function<Matrix(const Matrix&)>& action);
  static LinearMap transpose(std::size_t d);

  std::size_t dim() const { return dim_; }
  const Matrix& choi() const { return choi_; }

  Matrix apply(const Matrix& x) const;
  /// Applies the map to factor `sys` of an operator on the composite `dims`.
  Matrix apply_on(const Matrix& x, const Dims& dims, std::size_t sys) const;

 private:
  std::size_t dim_ = 0;
  Matrix choi_;
};

class QuantumChannel {
 public:
  QuantumChannel() = default;
  /// Accepts any list of equal-shape square operators; trace preservation and
  /// complete positivity are reported by validate(), not enforced here.
  static QuantumChannel from_kraus(std::vector<Matrix> kraus);
  /// Minimal Kraus set from the Choi eigendecomposition (eigenvalues < 1e-12 dropped).
  static QuantumChannel from_choi(std::size_t d, const Matrix& choi);

  std::size_t dim() const { return dim_; }
  std::size_t dim_in() const { return dim_; }
  std::size_t dim_out() const { return dim_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Matrix& choi() const { return choi_; }

  Matrix apply(const Matrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Heisenberg picture: sum_k A_k† G A_k.
  Matrix apply_adjoint(const Matrix& g) const;
  LinearMap as_map() const { return LinearMap::from_choi(dim_, choi_); }

 private:
  std::size_t dim_ = 0;
  std::vector<Matrix> kraus_;
  Matrix choi_;
};

struct ValidationReport {
  bool trace_preserving = false;
  bool completely_positive = false;
  double tp_residual = 0.0;         // max |sum A†A - I|
  double min_choi_eigenvalue = 0.0;
  bool valid() const { return trace_preserving && completely_positive; }
};

inline constexpr double kTracePreservingTol = 1e-9;

ValidationReport validate(const QuantumChannel& t);

/// Kraus set = all products of the constituents' Kraus operators.
QuantumChannel tensor_channels(const std::vector<QuantumChannel>& channels, std::size_t cap = kDefaultDimCap);

/// T(rho) = (1 tr(rho) - m M(rho)) / (d - m) with m M(rho0) a rank-m projection.
struct ProjectiveForm {
  std::size_t m = 0;
  std::size_t d = 0;
  LinearMap map;
  DensityMatrix rho0;
  Matrix projector;
  double reconstruction_residual = 0.0;

  /// (1 tr X - m M(X)) / (d - m).
  Matrix reconstruct(const Matrix& x) const;
};

/// Residual of the reconstruction against `t` on the matrix-unit basis.
double reconstruction_residual(const QuantumChannel& t, const ProjectiveForm& form);
/// Checks projector idempotency / trace; throws NotProjectiveClass on failure.
void check_projective_form(const QuantumChannel& t, ProjectiveForm& form, double recon_tol = 1e-8,
                           double projector_tol = 1e-6);

inline constexpr double kIntegerNormTol = 1e-6;

/// Reads off (m, M, rho0) from a norm maximizer: m0 = 1/norm must be an
/// integer within 1e-6, m = d - m0, M(rho) = m0/(d-m0) (tr(rho) 1/m0 - T(rho)).
ProjectiveForm extract_projective_form(const QuantumChannel& t, const DensityMatrix& argmax_state, double norm_value);

struct Isometry {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  std::size_t env_dim = 0;
  Matrix mat;  // (dim_out * env_dim) x dim_in, output factor first
};

/// U|psi> = sum_k A_k|psi> (x) |k> over Kraus operators with norm >= 1e-12.
Isometry stinespring(const QuantumChannel& t);

struct PptResult {
  bool ppt = false;
  double min_eigenvalue = 0.0;
};

/// Partial transpose of the Choi matrix on the reference factor.
PptResult is_ppt_choi(const QuantumChannel& t);

struct ProjectionCheck {
  bool is_projection = false;
  std::size_t rank = 0;
};

/// True iff the nonzero eigenvalues all equal 1/rank within tol; eigenvalues
/// at or below tol count as zero.
ProjectionCheck is_normalized_projection(const DensityMatrix& rho, double tol);
ProjectionCheck is_normalized_projection(const Matrix& rho, double tol);

}  // namespace projchan
