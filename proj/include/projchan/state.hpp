#pragma once

#include <cstddef>

#include "projchan/linalg.hpp"

namespace projchan {

inline constexpr double kStateTol = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix.
///
/// Eigenvalues in [-1e-10, 0) are treated as roundoff and clamped to zero by
/// spectrum(); anything more negative is rejected at construction.
class DensityMatrix {
 public:
  /// The 1x1 state; mostly useful as a placeholder.
  DensityMatrix();

  static DensityMatrix from_matrix(const Matrix& m, double tol = kStateTol);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(std::size_t d);
  static DensityMatrix basis_state(std::size_t d, std::size_t k);

  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

  /// Ascending eigenvalues with roundoff negatives clamped to zero.
  RealVector spectrum() const;
  double purity() const;
  /// Eigenvector of the largest eigenvalue (the state vector when pure).
  Vector dominant_vector() const;

 private:
  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

/// Clamps [-1e-10, 0) to zero; throws InvalidState below that.
RealVector clamp_spectrum(RealVector values, double tol = kStateTol);

/// Rank-one projector onto (1/sqrt d) sum_i |i,i>.
DensityMatrix max_entangled(std::size_t d);

}  // namespace projchan
