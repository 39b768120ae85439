#pragma once

// Dense complex kernel shared by every module.
//
// Composite systems are ordered left to right as tensor factors: for dims
// (d_0, ..., d_{n-1}) the flat index of the multi-index (i_0, ..., i_{n-1}) is
// i_0 * (d_1 ... d_{n-1}) + ... + i_{n-1}, i.e. the last factor varies fastest.
// Matrices are stored row-major.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace projchan {

using cplx = std::complex<double>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultDimCap = 4096;
inline constexpr double kHermitianTol = 1e-8;

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

HermitianEig eig_hermitian(const Matrix& h);
RealVector eigvals_hermitian(const Matrix& h);

Matrix tensor(const Matrix& a, const Matrix& b, std::size_t cap = kDefaultDimCap);
Matrix tensor_all(std::span<const Matrix> factors, std::size_t cap = kDefaultDimCap);
Vector tensor(const Vector& a, const Vector& b);

/// Reduced operator on the systems listed in `keep` (kept in increasing order).
/// An empty `keep` yields the 1x1 matrix holding the full trace.
Matrix partial_trace(const Matrix& x, const Dims& dims, std::vector<std::size_t> keep);
Matrix partial_transpose(const Matrix& x, const Dims& dims, std::size_t sys);

/// Reorders tensor factors: factor k of the result is factor order[k] of `x`.
Matrix permute_systems(const Matrix& x, const Dims& dims, const std::vector<std::size_t>& order);

/// F|i,j> = |j,i> on C^d (x) C^d.
Matrix flip(std::size_t d);
/// (1/sqrt d) sum_i |i,i>.
Vector max_entangled_vector(std::size_t d);

Matrix identity(std::size_t d);
Matrix projector(const Vector& v);
Matrix hermitian_part(const Matrix& x);

/// Largest entry modulus; used for every residual in the library.
double max_abs(const Matrix& x);
double hermiticity_residual(const Matrix& x);
/// Largest eigenvalue of a Hermitian matrix (the operator norm for PSD input).
double spectral_max(const Matrix& h);

std::size_t dims_product(const Dims& dims);
void check_square(const Matrix& x, const char* what);

}  // namespace projchan
