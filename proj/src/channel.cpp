#include "projchan/channel.hpp"

#include <cmath>
#include <string>

#include "projchan/error.hpp"

namespace projchan {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t v) { return static_cast<Idx>(v); }

Matrix unit(std::size_t d, std::size_t i, std::size_t j) {
  Matrix e = Matrix::Zero(ix(d), ix(d));
  e(ix(i), ix(j)) = 1.0;
  return e;
}

Matrix choi_from_kraus(std::size_t d, const std::vector<Matrix>& kraus) {
  const Idx n = ix(d * d);
  Matrix j = Matrix::Zero(n, n);
  for (const auto& a : kraus) {
    const Eigen::Map<const Vector> v(a.data(), n);  // row-major storage is vec(A)
    j.noalias() += v * v.adjoint();
  }
  return j / static_cast<double>(d);
}

}  // namespace

// ---------------------------------------------------------------- LinearMap

LinearMap LinearMap::from_choi(std::size_t d, Matrix choi) {
  if (d == 0) fail(ErrorKind::BadDims, "map dimension must be positive");
  if (choi.rows() != ix(d * d) || choi.cols() != ix(d * d)) {
    fail(ErrorKind::DimMismatch, "Choi matrix must be d^2 x d^2");
  }
  LinearMap m;
  m.dim_ = d;
  m.choi_ = std::move(choi);
  return m;
}

LinearMap LinearMap::from_action(std::size_t d, const std::function<Matrix(const Matrix&)>& action) {
  if (d == 0) fail(ErrorKind::BadDims, "map dimension must be positive");
  Matrix j = Matrix::Zero(ix(d * d), ix(d * d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const Matrix out = action(unit(d, r, c));
      if (out.rows() != ix(d) || out.cols() != ix(d)) fail(ErrorKind::DimMismatch, "map output has wrong shape");
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) j(ix(a * d + r), ix(b * d + c)) = out(ix(a), ix(b));
      }
    }
  }
  return from_choi(d, j / static_cast<double>(d));
}

LinearMap LinearMap::transpose(std::size_t d) {
  return from_choi(d, flip(d) / static_cast<double>(d));
}

Matrix LinearMap::apply(const Matrix& x) const {
  if (x.rows() != ix(dim_) || x.cols() != ix(dim_)) fail(ErrorKind::DimMismatch, "input dimension differs from map");
  const std::size_t d = dim_;
  Matrix y = Matrix::Zero(ix(d), ix(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) s += choi_(ix(a * d + i), ix(b * d + j)) * x(ix(i), ix(j));
      }
      y(ix(a), ix(b)) = s * static_cast<double>(d);
    }
  }
  return y;
}

Matrix LinearMap::apply_on(const Matrix& x, const Dims& dims, std::size_t sys) const {
  if (sys >= dims.size()) fail(ErrorKind::BadDims, "subsystem index out of range");
  if (dims[sys] != dim_) fail(ErrorKind::DimMismatch, "subsystem dimension differs from map");
  const std::size_t total = dims_product(dims);
  if (x.rows() != ix(total) || x.cols() != ix(total)) fail(ErrorKind::DimMismatch, "operator does not match dims");
  const std::size_t d = dim_;
  std::size_t inner = 1;
  for (std::size_t k = sys + 1; k < dims.size(); ++k) inner *= dims[k];
  const std::size_t outer = total / (d * inner);
  const double scale = static_cast<double>(d);

  Matrix y = Matrix::Zero(ix(total), ix(total));
  // Rows (o, a, n) and columns (o2, b, n2); the map mixes only the middle digit.
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t n = 0; n < inner; ++n) {
      for (std::size_t o2 = 0; o2 < outer; ++o2) {
        for (std::size_t n2 = 0; n2 < inner; ++n2) {
          for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
              const cplx xv = x(ix((o * d + i) * inner + n), ix((o2 * d + j) * inner + n2));
              if (xv == cplx(0.0)) continue;
              for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                  y(ix((o * d + a) * inner + n), ix((o2 * d + b) * inner + n2)) +=
                      scale * choi_(ix(a * d + i), ix(b * d + j)) * xv;
                }
              }
            }
          }
        }
      }
    }
  }
  return y;
}

// ----------------------------------------------------------- QuantumChannel

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus) {
  if (kraus.empty()) fail(ErrorKind::BadDims, "a channel needs at least one Kraus operator");
  const Idx d = kraus.front().rows();
  if (d == 0) fail(ErrorKind::BadDims, "Kraus operators must be nonempty");
  for (const auto& a : kraus) {
    if (a.rows() != d || a.cols() != d) fail(ErrorKind::DimMismatch, "Kraus operators must share one square shape");
    if (!a.allFinite()) fail(ErrorKind::BadDims, "non-finite Kraus entry");
  }
  QuantumChannel t;
  t.dim_ = static_cast<std::size_t>(d);
  t.choi_ = choi_from_kraus(t.dim_, kraus);
  t.kraus_ = std::move(kraus);
  return t;
}

QuantumChannel QuantumChannel::from_choi(std::size_t d, const Matrix& choi) {
  if (d == 0) fail(ErrorKind::BadDims, "channel dimension must be positive");
  if (choi.rows() != ix(d * d) || choi.cols() != ix(d * d)) fail(ErrorKind::DimMismatch, "Choi matrix must be d^2 x d^2");
  const auto eig = eig_hermitian(choi);
  std::vector<Matrix> kraus;
  for (Idx k = eig.values.size() - 1; k >= 0; --k) {
    const double lam = eig.values(k);
    if (lam < 1e-12) continue;
    const Vector v = eig.vectors.col(k) * std::sqrt(static_cast<double>(d) * lam);
    Matrix a(ix(d), ix(d));
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a(ix(r), ix(c)) = v(ix(r * d + c));
    }
    kraus.push_back(std::move(a));
  }
  if (kraus.empty()) fail(ErrorKind::ValidationError, "Choi matrix has no positive eigenvalues");
  return from_kraus(std::move(kraus));
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  if (rho.rows() != ix(dim_) || rho.cols() != ix(dim_)) fail(ErrorKind::DimMismatch, "input dimension differs from channel");
  Matrix out = Matrix::Zero(ix(dim_), ix(dim_));
  for (const auto& a : kraus_) out.noalias() += a * rho * a.adjoint();
  return out;
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix::from_matrix(apply(rho.matrix()), 1e-8);
}

Matrix QuantumChannel::apply_adjoint(const Matrix& g) const {
  if (g.rows() != ix(dim_) || g.cols() != ix(dim_)) fail(ErrorKind::DimMismatch, "operator dimension differs from channel");
  Matrix out = Matrix::Zero(ix(dim_), ix(dim_));
  for (const auto& a : kraus_) out.noalias() += a.adjoint() * g * a;
  return out;
}

// --------------------------------------------------------------- validation

ValidationReport validate(const QuantumChannel& t) {
  ValidationReport r;
  Matrix s = Matrix::Zero(ix(t.dim()), ix(t.dim()));
  for (const auto& a : t.kraus()) s.noalias() += a.adjoint() * a;
  r.tp_residual = max_abs(s - identity(t.dim()));
  r.trace_preserving = r.tp_residual <= kTracePreservingTol;
  r.min_choi_eigenvalue = eigvals_hermitian(hermitian_part(t.choi()))(0);
  r.completely_positive = r.min_choi_eigenvalue >= -kTracePreservingTol;
  return r;
}

QuantumChannel tensor_channels(const std::vector<QuantumChannel>& channels, std::size_t cap) {
  if (channels.empty()) fail(ErrorKind::BadDims, "no channels to combine");
  std::size_t total = 1;
  for (const auto& c : channels) {
    if (total > cap / c.dim()) fail(ErrorKind::DimensionOverflow, "composite dimension exceeds cap " + std::to_string(cap));
    total *= c.dim();
  }
  std::vector<Matrix> acc = channels.front().kraus();
  for (std::size_t k = 1; k < channels.size(); ++k) {
    std::vector<Matrix> next;
    next.reserve(acc.size() * channels[k].kraus().size());
    for (const auto& a : acc) {
      for (const auto& b : channels[k].kraus()) next.push_back(tensor(a, b, cap));
    }
    acc = std::move(next);
  }
  return QuantumChannel::from_kraus(std::move(acc));
}

// ----------------------------------------------------------- projective form

Matrix ProjectiveForm::reconstruct(const Matrix& x) const {
  const double md = static_cast<double>(m);
  return (x.trace() * identity(d) - md * map.apply(x)) / (static_cast<double>(d) - md);
}

double reconstruction_residual(const QuantumChannel& t, const ProjectiveForm& form) {
  double worst = 0.0;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    for (std::size_t j = 0; j < t.dim(); ++j) {
      const Matrix e = unit(t.dim(), i, j);
      worst = std::max(worst, max_abs(t.apply(e) - form.reconstruct(e)));
    }
  }
  return worst;
}

void check_projective_form(const QuantumChannel& t, ProjectiveForm& form, double recon_tol, double projector_tol) {
  form.reconstruction_residual = reconstruction_residual(t, form);
  if (form.reconstruction_residual > recon_tol) {
    fail(ErrorKind::NotProjectiveClass, "reconstruction residual " + std::to_string(form.reconstruction_residual));
  }
  const Matrix& p = form.projector;
  const double idem = max_abs(p * p - p);
  const double rank_gap = std::abs(p.trace().real() - static_cast<double>(form.m));
  if (idem > projector_tol || rank_gap > projector_tol) {
    fail(ErrorKind::NotProjectiveClass, "m M(rho0) is not a rank-" + std::to_string(form.m) +
                                            " projection (idempotency residual " + std::to_string(idem) + ")");
  }
}

ProjectiveForm extract_projective_form(const QuantumChannel& t, const DensityMatrix& argmax_state, double norm_value) {
  const std::size_t d = t.dim();
  if (argmax_state.dim() != d) fail(ErrorKind::DimMismatch, "state dimension differs from channel");
  if (!(norm_value > 0.0)) fail(ErrorKind::NotProjectiveClass, "nonpositive maximal output norm");
  const double inv = 1.0 / norm_value;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > kIntegerNormTol) {
    fail(ErrorKind::NotProjectiveClass, "1/||T||_max = " + std::to_string(inv) + " is not an integer");
  }
  const auto m0 = static_cast<std::size_t>(rounded);
  if (m0 < 1 || m0 >= d) fail(ErrorKind::NotProjectiveClass, "m = d - 1/||T||_max must be at least 1");

  const double m0d = static_cast<double>(m0);
  const double dd = static_cast<double>(d);
  ProjectiveForm form;
  form.d = d;
  form.m = d - m0;
  const Matrix jm = (m0d / (dd - m0d)) * (identity(d * d) / (m0d * dd) - t.choi());
  form.map = LinearMap::from_choi(d, jm);
  form.rho0 = argmax_state;
  form.projector = static_cast<double>(form.m) * form.map.apply(argmax_state.matrix());
  check_projective_form(t, form);
  return form;
}

// -------------------------------------------------------------- dilation

Isometry stinespring(const QuantumChannel& t) {
  std::vector<const Matrix*> kept;
  for (const auto& a : t.kraus()) {
    if (a.norm() >= 1e-12) kept.push_back(&a);
  }
  if (kept.empty()) fail(ErrorKind::ValidationError, "all Kraus operators vanish");
  Isometry u;
  u.dim_in = t.dim();
  u.dim_out = t.dim();
  u.env_dim = kept.size();
  const std::size_t e = u.env_dim;
  u.mat = Matrix::Zero(ix(t.dim() * e), ix(t.dim()));
  for (std::size_t k = 0; k < e; ++k) {
    for (std::size_t a = 0; a < t.dim(); ++a) {
      for (std::size_t i = 0; i < t.dim(); ++i) u.mat(ix(a * e + k), ix(i)) = (*kept[k])(ix(a), ix(i));
    }
  }
  return u;
}

PptResult is_ppt_choi(const QuantumChannel& t) {
  const Matrix pt = partial_transpose(t.choi(), {t.dim(), t.dim()}, 1);
  PptResult r;
  r.min_eigenvalue = eigvals_hermitian(hermitian_part(pt))(0);
  r.ppt = r.min_eigenvalue >= -1e-10;
  return r;
}

ProjectionCheck is_normalized_projection(const Matrix& rho, double tol) {
  check_square(rho, "state");
  const RealVector ev = eigvals_hermitian(rho);
  ProjectionCheck r;
  for (Idx k = 0; k < ev.size(); ++k) {
    if (ev(k) > tol) ++r.rank;
  }
  if (r.rank == 0) return r;
  const double level = 1.0 / static_cast<double>(r.rank);
  bool ok = true;
  for (Idx k = 0; k < ev.size(); ++k) {
    if (ev(k) > tol) {
      ok = ok && std::abs(ev(k) - level) <= tol;
    } else {
      ok = ok && ev(k) >= -tol;
    }
  }
  r.is_projection = ok;
  return r;
}

ProjectionCheck is_normalized_projection(const DensityMatrix& rho, double tol) {
  return is_normalized_projection(rho.matrix(), tol);
}

}  // namespace projchan
