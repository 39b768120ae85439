#include "projchan/eof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "projchan/error.hpp"
#include "projchan/parallel.hpp"
#include "projchan/random.hpp"

namespace projchan {

namespace {

using Idx = Eigen::Index;
constexpr double kLogFloor = 1e-14;
constexpr double kProbFloor = 1e-15;

Idx ix(std::size_t v) { return static_cast<Idx>(v); }

/// tr_B of an (unnormalized) vector on A (x) B: reshape to dimA x dimB, then M M†.
Matrix reduce_vector(const Vector& psi, std::size_t dimA, std::size_t dimB) {
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(psi.data(), ix(dimA), ix(dimB));
  return m * m.adjoint();
}

/// Problem data: purification vectors v_j = sqrt(lambda_j) e_j as columns.
struct EofProblem {
  std::size_t dimA = 0;
  std::size_t dimB = 0;
  Matrix v;  // (dimA dimB) x r
};

struct EofEval {
  double value = 0.0;
  Matrix psi;  // columns psi_i, unnormalized
  std::vector<double> probs;
};

EofEval eval_ensemble(const EofProblem& pb, const Matrix& u) {
  EofEval e;
  e.psi = pb.v * u.transpose();  // column i = sum_j U_ij v_j
  e.probs.resize(static_cast<std::size_t>(u.rows()));
  for (Idx i = 0; i < u.rows(); ++i) {
    const double p = e.psi.col(i).squaredNorm();
    e.probs[static_cast<std::size_t>(i)] = p;
    if (p < kProbFloor) continue;
    const RealVector lam = eigvals_hermitian(hermitian_part(reduce_vector(e.psi.col(i), pb.dimA, pb.dimB)));
    double s = 0.0;
    for (Idx k = 0; k < lam.size(); ++k) {
      if (lam(k) > 0.0) s -= lam(k) * std::log2(lam(k));
    }
    e.value += s + p * std::log2(p);
  }
  return e;
}

/// Euclidean gradient Gamma_ij = 2 v_j† (G_i (x) 1) psi_i with
/// G_i = log2(p_i) 1 - log2(sigma_i).
Matrix euclidean_gradient(const EofProblem& pb, const EofEval& e, Idx k) {
  const Idx r = pb.v.cols();
  Matrix gamma = Matrix::Zero(k, r);
  for (Idx i = 0; i < k; ++i) {
    const double p = e.probs[static_cast<std::size_t>(i)];
    if (p < kProbFloor) continue;
    const Vector psi = e.psi.col(i);
    const auto eig = eig_hermitian(hermitian_part(reduce_vector(psi, pb.dimA, pb.dimB)));
    RealVector w(eig.values.size());
    for (Idx a = 0; a < w.size(); ++a) w(a) = std::log2(p) - std::log2(std::max(eig.values(a), kLogFloor));
    const Matrix g = eig.vectors * w.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    // (G (x) 1) psi: reshape psi to dimA x dimB and left-multiply.
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        psi.data(), ix(pb.dimA), ix(pb.dimB));
    Matrix gm = g * m;
    const Eigen::Map<const Vector> gpsi(gm.data(), gm.size());
    gamma.row(i) = 2.0 * (pb.v.adjoint() * gpsi).transpose();
  }
  return gamma;
}

Matrix qr_retract(const Matrix& y) {
  Eigen::MatrixXcd a = y;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXcd& rr = qr.matrixQR();
  for (Idx k = 0; k < q.cols(); ++k) {
    const cplx d = rr(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

struct EofStart {
  double value = 0.0;
  Matrix u;
  bool converged = false;
};

EofStart descend_stiefel(const EofProblem& pb, Matrix u, std::size_t max_iters) {
  EofStart s;
  s.u = std::move(u);
  EofEval cur = eval_ensemble(pb, s.u);
  s.value = cur.value;
  const Idx k = s.u.rows();
  double step = 0.1;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Matrix gamma = euclidean_gradient(pb, cur, k);
    const Matrix utg = s.u.adjoint() * gamma;
    const Matrix grad = gamma - s.u * (0.5 * (utg + utg.adjoint()));
    const double gsq = grad.squaredNorm();
    if (!(gsq > 1e-30)) {
      s.converged = true;
      break;
    }
    step = std::min(step * 2.0, 1.0 / std::sqrt(gsq));
    bool accepted = false;
    Matrix next;
    EofEval next_eval;
    while (step > 1e-16) {
      next = qr_retract(s.u - step * grad);
      next_eval = eval_ensemble(pb, next);
      // Armijo condition; the slope along -grad is -|grad|^2.
      if (next_eval.value <= s.value - 1e-4 * step * gsq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      s.converged = true;
      break;
    }
    const double improvement = s.value - next_eval.value;
    s.u = std::move(next);
    s.value = next_eval.value;
    cur = std::move(next_eval);
    if (improvement < 1e-12) {
      s.converged = true;
      break;
    }
  }
  return s;
}

}  // namespace

BipartiteState make_bipartite(std::size_t dimA, std::size_t dimB, const Matrix& rho) {
  if (dimA == 0 || dimB == 0) fail(ErrorKind::BadDims, "subsystem dimensions must be positive");
  if (rho.rows() != ix(dimA * dimB)) fail(ErrorKind::DimMismatch, "state dimension differs from dimA * dimB");
  return BipartiteState{dimA, dimB, DensityMatrix::from_matrix(rho)};
}

double entanglement_entropy(const Vector& psi, std::size_t dimA, std::size_t dimB) {
  if (psi.size() != ix(dimA * dimB)) fail(ErrorKind::DimMismatch, "vector dimension differs from dimA * dimB");
  const Vector u = psi / psi.norm();
  return renyi_from_spectrum(eigvals_hermitian(hermitian_part(reduce_vector(u, dimA, dimB))), 1.0);
}

std::vector<Vector> example9_vectors() {
  const cplx i(0.0, 1.0);
  // Basis label |a, b> with a, b in 1..4 sits at index 4 (a - 1) + (b - 1).
  auto ket = [](int a, int b) {
    Vector v = Vector::Zero(16);
    v(4 * (a - 1) + (b - 1)) = 1.0;
    return v;
  };
  std::vector<Vector> out{
      (i * (ket(1, 4) + ket(2, 3) - ket(3, 2)) + ket(4, 1)) / 2.0,
      (i * (-ket(1, 3) + ket(2, 4) + ket(3, 1)) + ket(4, 2)) / 2.0,
      (i * (ket(1, 2) - ket(2, 1) + ket(3, 4)) + ket(4, 3)) / 2.0,
      (i * (-ket(1, 1) - ket(2, 2) - ket(3, 3)) + ket(4, 4)) / 2.0,
  };
  return out;
}

BipartiteState example9_state() {
  Matrix rho = Matrix::Zero(16, 16);
  for (const auto& v : example9_vectors()) rho += projector(v) / 4.0;
  return make_bipartite(4, 4, rho);
}

BipartiteState channel_optimal_state(const QuantumChannel& t, const Ensemble& e) {
  check_ensemble(e, t.dim());
  const Isometry u = stinespring(t);
  const std::size_t n = u.dim_out * u.env_dim;
  Matrix rho = Matrix::Zero(ix(n), ix(n));
  for (std::size_t k = 0; k < e.states.size(); ++k) {
    if (std::abs(e.states[k].purity() - 1.0) > 1e-10) {
      fail(ErrorKind::NonPureEnsemble, "ensemble member " + std::to_string(k) + " is not pure");
    }
    const Vector phi = u.mat * e.states[k].dominant_vector();
    rho += e.probs[k] * projector(phi);
  }
  return make_bipartite(u.dim_out, u.env_dim, hermitian_part(rho));
}

EofReport eof_upper(const BipartiteState& rho, const EofConfig& cfg) {
  const auto eig = eig_hermitian(rho.mat.matrix());
  EofProblem pb;
  pb.dimA = rho.dimA;
  pb.dimB = rho.dimB;
  std::vector<Idx> keep;
  for (Idx k = eig.values.size() - 1; k >= 0; --k) {
    if (eig.values(k) > 1e-12) keep.push_back(k);
  }
  const Idx r = static_cast<Idx>(keep.size());
  pb.v = Matrix(eig.vectors.rows(), r);
  for (Idx j = 0; j < r; ++j) pb.v.col(j) = eig.vectors.col(keep[static_cast<std::size_t>(j)]) * std::sqrt(eig.values(keep[static_cast<std::size_t>(j)]));

  const std::size_t k = cfg.ensemble_size ? cfg.ensemble_size : static_cast<std::size_t>(r * r);
  if (k < static_cast<std::size_t>(r)) fail(ErrorKind::BadDims, "ensemble size must be at least the rank");
  const std::size_t n = std::max<std::size_t>(cfg.starts, 1);

  std::vector<EofStart> results(n);
  parallel_for(n, [&](std::size_t s) {
    Matrix u;
    if (s == 0) {
      u = Matrix::Zero(ix(k), r);
      u.topRows(r) = Matrix::Identity(r, r);
    } else {
      Rng rng(derive_seed(cfg.seed, s));
      u = haar_isometry(k, static_cast<std::size_t>(r), rng);
    }
    results[s] = descend_stiefel(pb, std::move(u), cfg.max_iters);
  });

  EofReport rep;
  rep.seed = cfg.seed;
  rep.rank = static_cast<std::size_t>(r);
  rep.ensemble_size = k;
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    rep.per_start_values.push_back(results[s].value);
    if (results[s].value < results[best].value - 1e-12) best = s;
    rep.converged = rep.converged || results[s].converged;
  }
  rep.best_start = best;

  const EofEval fin = eval_ensemble(pb, results[best].u);
  rep.value = std::max(0.0, fin.value);
  for (Idx i = 0; i < fin.psi.cols(); ++i) {
    const double p = fin.probs[static_cast<std::size_t>(i)];
    if (p < kProbFloor) continue;
    rep.ensemble.probs.push_back(p);
    rep.ensemble.states.push_back(DensityMatrix::pure(fin.psi.col(i)));
  }
  double total = 0.0;
  for (double p : rep.ensemble.probs) total += p;
  for (double& p : rep.ensemble.probs) p /= total;
  return rep;
}

}  // namespace projchan
