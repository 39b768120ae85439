#include "projchan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "projchan/error.hpp"

namespace projchan {

namespace {

using ColMajor = Eigen::MatrixXcd;

// Strides of a row-major multi-index (last factor fastest).
std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void check_dims(const Matrix& x, const Dims& dims) {
  if (x.rows() != x.cols()) fail(ErrorKind::BadDims, "operator is not square");
  if (dims_product(dims) != static_cast<std::size_t>(x.rows())) {
    fail(ErrorKind::BadDims, "product of subsystem dimensions " + std::to_string(dims_product(dims)) +
                                 " does not match matrix dimension " + std::to_string(x.rows()));
  }
}

}  // namespace

std::size_t dims_product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_square(const Matrix& x, const char* what) {
  if (x.rows() != x.cols()) fail(ErrorKind::BadDims, std::string(what) + " must be square");
}

double max_abs(const Matrix& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const Matrix& x) {
  return max_abs(x - x.adjoint());
}

Matrix hermitian_part(const Matrix& x) {
  return (x + x.adjoint()) * 0.5;
}

HermitianEig eig_hermitian(const Matrix& h) {
  check_square(h, "eig_hermitian input");
  const double resid = hermiticity_residual(h);
  if (!(resid <= kHermitianTol)) {
    fail(ErrorKind::NotHermitian, "symmetry residual " + std::to_string(resid) + " exceeds 1e-8");
  }
  if (!h.allFinite()) fail(ErrorKind::NotHermitian, "non-finite entries");
  ColMajor sym = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<ColMajor> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "Hermitian eigensolver");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigvals_hermitian(const Matrix& h) {
  check_square(h, "eigvals_hermitian input");
  const double resid = hermiticity_residual(h);
  if (!(resid <= kHermitianTol)) {
    fail(ErrorKind::NotHermitian, "symmetry residual " + std::to_string(resid) + " exceeds 1e-8");
  }
  ColMajor sym = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<ColMajor> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "Hermitian eigensolver");
  return solver.eigenvalues();
}

double spectral_max(const Matrix& h) {
  return eigvals_hermitian(h).maxCoeff();
}

Matrix tensor(const Matrix& a, const Matrix& b, std::size_t cap) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  if (rows > cap || cols > cap) {
    fail(ErrorKind::DimensionOverflow,
         "tensor product dimension " + std::to_string(std::max(rows, cols)) + " exceeds cap " + std::to_string(cap));
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix tensor_all(std::span<const Matrix> factors, std::size_t cap) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = tensor(out, f, cap);
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix partial_trace(const Matrix& x, const Dims& dims, std::vector<std::size_t> keep) {
  check_dims(x, dims);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto k : keep) {
    if (k >= dims.size()) fail(ErrorKind::BadDims, "kept subsystem index out of range");
  }
  const auto n = dims.size();
  const auto strides = strides_of(dims);
  std::vector<bool> kept(n, false);
  for (auto k : keep) kept[k] = true;

  Dims kept_dims, traced_dims;
  for (std::size_t s = 0; s < n; ++s) (kept[s] ? kept_dims : traced_dims).push_back(dims[s]);
  const auto kept_strides = strides_of(kept_dims);
  const auto traced_strides = strides_of(traced_dims);
  const std::size_t dk = dims_product(kept_dims);
  const std::size_t dt = dims_product(traced_dims);

  // Split each flat index into (kept index, traced index).
  const auto total = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> kidx(total), tidx(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t ki = 0, ti = 0, ks = 0, ts = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t digit = (flat / strides[s]) % dims[s];
      if (kept[s]) {
        ki += digit * kept_strides[ks++];
      } else {
        ti += digit * traced_strides[ts++];
      }
    }
    kidx[flat] = ki;
    tidx[flat] = ti;
  }
  // Group flat indices by traced index so only matching pairs are visited.
  std::vector<std::vector<std::size_t>> groups(dt);
  for (std::size_t flat = 0; flat < total; ++flat) groups[tidx[flat]].push_back(flat);

  Matrix out = Matrix::Zero(dk, dk);
  for (const auto& g : groups) {
    for (auto r : g) {
      for (auto c : g) out(kidx[r], kidx[c]) += x(r, c);
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& x, const Dims& dims, std::size_t sys) {
  check_dims(x, dims);
  if (sys >= dims.size()) fail(ErrorKind::BadDims, "transposed subsystem index out of range");
  const auto strides = strides_of(dims);
  const std::size_t stride = strides[sys];
  const std::size_t ds = dims[sys];
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const std::size_t rd = (static_cast<std::size_t>(r) / stride) % ds;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const std::size_t cd = (static_cast<std::size_t>(c) / stride) % ds;
      // Swap the digit of subsystem `sys` between row and column.
      const auto r2 = static_cast<Eigen::Index>(r + (cd - rd) * stride);
      const auto c2 = static_cast<Eigen::Index>(c + (rd - cd) * stride);
      out(r2, c2) = x(r, c);
    }
  }
  return out;
}

Matrix permute_systems(const Matrix& x, const Dims& dims, const std::vector<std::size_t>& order) {
  check_dims(x, dims);
  const auto n = dims.size();
  if (order.size() != n) fail(ErrorKind::BadDims, "permutation length mismatch");
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < n; ++k) {
      if (sorted[k] != k) fail(ErrorKind::BadDims, "not a permutation");
    }
  }
  Dims new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  const auto total = static_cast<std::size_t>(x.rows());
  std::vector<Eigen::Index> map(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t target = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t digit = (flat / old_strides[order[k]]) % dims[order[k]];
      target += digit * new_strides[k];
    }
    map[flat] = static_cast<Eigen::Index>(target);
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) out(map[r], map[c]) = x(r, c);
  }
  return out;
}

Matrix flip(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d * d);
  Matrix f = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  }
  return f;
}

Vector max_entangled_vector(std::size_t d) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) v(i * d + i) = amp;
  return v;
}

Matrix identity(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

Matrix projector(const Vector& v) {
  return v * v.adjoint();
}

}  // namespace projchan
