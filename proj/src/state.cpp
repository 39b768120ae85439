#include "projchan/state.hpp"

#include <cmath>
#include <string>

#include "projchan/error.hpp"

namespace projchan {

DensityMatrix::DensityMatrix() : mat_(Matrix::Identity(1, 1)) {}

RealVector clamp_spectrum(RealVector values, double tol) {
  for (auto& v : values) {
    if (v < -tol) fail(ErrorKind::InvalidState, "eigenvalue " + std::to_string(v) + " below -1e-10");
    if (v < 0.0) v = 0.0;
  }
  return values;
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::InvalidState, "state must be a nonempty square matrix");
  if (!m.allFinite()) fail(ErrorKind::InvalidState, "non-finite entries");
  const double herm = hermiticity_residual(m);
  if (herm > tol) fail(ErrorKind::InvalidState, "hermiticity residual " + std::to_string(herm));
  Matrix h = hermitian_part(m);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol) fail(ErrorKind::InvalidState, "trace " + std::to_string(tr) + " differs from 1");
  clamp_spectrum(eigvals_hermitian(h), tol);
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0) || !psi.allFinite()) fail(ErrorKind::InvalidState, "zero or non-finite state vector");
  const Vector u = psi / n;
  return DensityMatrix(projector(u));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  return DensityMatrix(identity(d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(std::size_t d, std::size_t k) {
  if (k >= d) fail(ErrorKind::InvalidState, "basis index out of range");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return DensityMatrix(std::move(m));
}

RealVector DensityMatrix::spectrum() const {
  return clamp_spectrum(eigvals_hermitian(mat_));
}

double DensityMatrix::purity() const {
  return mat_.cwiseAbs2().sum();
}

Vector DensityMatrix::dominant_vector() const {
  const auto eig = eig_hermitian(mat_);
  return eig.vectors.col(eig.vectors.cols() - 1);
}

DensityMatrix max_entangled(std::size_t d) {
  return DensityMatrix::pure(max_entangled_vector(d));
}

}  // namespace projchan
