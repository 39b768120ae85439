#include "projchan/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "projchan/error.hpp"
#include "projchan/parallel.hpp"
#include "projchan/random.hpp"

namespace projchan {

namespace {

using Idx = Eigen::Index;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kGradientFloor = 1e-14;
constexpr double kImproveTol = 1e-12;
constexpr double kTieTol = 1e-12;
constexpr double kGapTol = 1e-8;

bool is_von_neumann(double alpha) { return std::abs(alpha - 1.0) <= kVonNeumannBand; }

// ------------------------------------------------------------ objective

Matrix output_of(const QuantumChannel& t, const Vector& psi) {
  const Idx d = static_cast<Idx>(t.dim());
  Matrix sigma = Matrix::Zero(d, d);
  for (const auto& a : t.kraus()) {
    const Vector v = a * psi;
    sigma.noalias() += v * v.adjoint();
  }
  return hermitian_part(sigma);
}

RealVector clamped(const RealVector& v) { return v.cwiseMax(0.0); }

/// d S_alpha / d lambda_i, for alpha in (0, inf) including the von Neumann case.
RealVector spectral_weights(const RealVector& lam_raw, double alpha) {
  const RealVector lam = clamped(lam_raw);
  const Idx n = lam.size();
  RealVector w = RealVector::Zero(n);
  if (std::isinf(alpha)) {
    const double top = std::max(lam(n - 1), kGradientFloor);
    w(n - 1) = -1.0 / (kLn2 * top);
    return w;
  }
  if (is_von_neumann(alpha)) {
    for (Idx i = 0; i < n; ++i) w(i) = -(std::log2(std::max(lam(i), kGradientFloor)) + 1.0 / kLn2);
    return w;
  }
  double s = 0.0;
  for (Idx i = 0; i < n; ++i) s += std::pow(lam(i), alpha);
  for (Idx i = 0; i < n; ++i) {
    const double base = alpha < 1.0 ? std::max(lam(i), kGradientFloor) : lam(i);
    w(i) = alpha * std::pow(base, alpha - 1.0) / ((1.0 - alpha) * kLn2 * s);
  }
  return w;
}

double min_gap(const RealVector& lam) {
  double g = std::numeric_limits<double>::infinity();
  for (Idx i = 1; i < lam.size(); ++i) g = std::min(g, lam(i) - lam(i - 1));
  return g;
}

struct Evaluation {
  double value = 0.0;
  HermitianEig eig;
};

Evaluation evaluate(const QuantumChannel& t, const Vector& psi, double alpha) {
  Evaluation e;
  e.eig = eig_hermitian(output_of(t, psi));
  e.value = renyi_from_spectrum(e.eig.values, alpha);
  return e;
}

/// Great-circle step: cos(theta) psi + sin(theta) u for unit u orthogonal to psi.
Vector rotate(const Vector& psi, const Vector& u, double theta) {
  Vector out = std::cos(theta) * psi + std::sin(theta) * u;
  return out / out.norm();
}

struct StartResult {
  double value = 0.0;
  Vector psi;
  bool converged = false;
};

/// Derivative-free pattern search along projected coordinate directions.
void coordinate_polish(const QuantumChannel& t, double alpha, StartResult& r) {
  const Idx d = r.psi.size();
  double theta = 1e-2;
  std::size_t evals = 0;
  const std::size_t budget = 40000;
  while (theta >= 1e-9 && evals < budget) {
    bool improved = false;
    for (Idx k = 0; k < d && evals < budget; ++k) {
      for (const cplx phase : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
        Vector u = Vector::Zero(d);
        u(k) = phase;
        u -= r.psi * r.psi.dot(u);
        const double n = u.norm();
        if (n < 1e-8) continue;
        u /= n;
        for (const double sign : {1.0, -1.0}) {
          const Vector trial = rotate(r.psi, u, sign * theta);
          const double v = evaluate(t, trial, alpha).value;
          ++evals;
          if (v < r.value - 1e-15) {
            r.value = v;
            r.psi = trial;
            improved = true;
            break;
          }
        }
      }
    }
    if (!improved) theta *= 0.25;
  }
}

/// Riemannian gradient descent on the unit sphere with Armijo backtracking
/// along geodesics; alpha must be positive.
StartResult descend(const QuantumChannel& t, double alpha, Vector psi, std::size_t max_iters) {
  StartResult r;
  r.psi = psi / psi.norm();
  Evaluation cur = evaluate(t, r.psi, alpha);
  r.value = cur.value;
  double theta = 0.1;
  bool line_search_failed = false;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const RealVector w = spectral_weights(cur.eig.values, alpha);
    const Matrix g_out = cur.eig.vectors * w.cast<cplx>().asDiagonal() * cur.eig.vectors.adjoint();
    const Vector h_psi = t.apply_adjoint(g_out) * r.psi;
    Vector grad = 2.0 * (h_psi - r.psi * r.psi.dot(h_psi));
    const double gnorm = grad.norm();
    if (!(gnorm > 1e-15)) {
      r.converged = true;
      break;
    }
    const Vector dir = -grad / gnorm;
    theta = std::min(2.0 * theta, std::numbers::pi / 4.0);
    bool accepted = false;
    Vector next;
    Evaluation next_eval;
    while (theta > 1e-14) {
      next = rotate(r.psi, dir, theta);
      next_eval = evaluate(t, next, alpha);
      if (next_eval.value <= r.value - 1e-4 * theta * gnorm) {
        accepted = true;
        break;
      }
      theta *= 0.5;
    }
    if (!accepted) {
      line_search_failed = true;
      break;
    }
    const double improvement = r.value - next_eval.value;
    r.psi = next;
    r.value = next_eval.value;
    cur = std::move(next_eval);
    if (improvement < kImproveTol) {
      r.converged = true;
      break;
    }
  }
  if (line_search_failed || min_gap(cur.eig.values) < kGapTol) {
    coordinate_polish(t, alpha, r);
    r.converged = true;
  }
  return r;
}

/// Alternating ascent for the largest output eigenvalue: phi = top output
/// eigenvector, then psi = top eigenvector of T*(|phi><phi|). Each half step
/// cannot decrease lambda_max.
StartResult ascend_norm(const QuantumChannel& t, Vector psi, std::size_t max_iters) {
  StartResult r;
  r.psi = psi / psi.norm();
  Evaluation cur = evaluate(t, r.psi, kAlphaInf);
  r.value = cur.value;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Idx top = cur.eig.values.size() - 1;
    const Vector phi = cur.eig.vectors.col(top);
    const auto h = eig_hermitian(t.apply_adjoint(projector(phi)));
    const Vector next = h.vectors.col(h.vectors.cols() - 1);
    Evaluation next_eval = evaluate(t, next, kAlphaInf);
    const double improvement = r.value - next_eval.value;
    if (improvement < 0.0) {
      r.converged = true;
      break;
    }
    r.psi = next;
    r.value = next_eval.value;
    cur = std::move(next_eval);
    if (improvement < kImproveTol) {
      r.converged = true;
      break;
    }
  }
  if (min_gap(cur.eig.values) < kGapTol) coordinate_polish(t, kAlphaInf, r);
  return r;
}

std::size_t rank_above(const RealVector& lam, double cutoff) {
  std::size_t r = 0;
  for (Idx i = 0; i < lam.size(); ++i) {
    if (lam(i) > cutoff) ++r;
  }
  return r;
}

StartResult run_start(const QuantumChannel& t, double alpha, const Vector& start, std::size_t max_iters) {
  if (std::isinf(alpha)) return ascend_norm(t, start, max_iters);
  if (alpha > 0.0) return descend(t, alpha, start, max_iters);
  // alpha = 0: rank is piecewise constant, so descend on smooth surrogates that
  // favour small rank, then squeeze the numerically small tail to zero.
  StartResult s2 = descend(t, 2.0, start, max_iters);
  StartResult s = descend(t, 0.25, s2.psi, max_iters);
  Vector psi = s.psi;
  const auto eig = eig_hermitian(output_of(t, psi));
  const std::size_t loose = rank_above(eig.values, 1e-6);
  if (loose < static_cast<std::size_t>(eig.values.size())) {
    const Vector refined = refine_output_support(t, psi, std::max<std::size_t>(loose, 1));
    if (evaluate(t, refined, 0.0).value <= evaluate(t, psi, 0.0).value) psi = refined;
  }
  StartResult out;
  out.psi = psi;
  out.value = evaluate(t, psi, 0.0).value;
  out.converged = s2.converged && s.converged;
  return out;
}

OptReport multistart(const QuantumChannel& t, double alpha, const OptConfig& cfg, const std::vector<Vector>& warm) {
  const std::size_t d = t.dim();
  for (const auto& v : warm) {
    if (static_cast<std::size_t>(v.size()) != d) fail(ErrorKind::DimMismatch, "warm start dimension differs from channel");
  }
  const std::size_t n = std::max(cfg.starts, warm.size());
  if (n == 0) fail(ErrorKind::BadDims, "at least one start is required");
  std::vector<StartResult> results(n);
  parallel_for(n, [&](std::size_t k) {
    Vector start;
    if (k < warm.size()) {
      start = warm[k];
    } else {
      Rng rng(derive_seed(cfg.seed, k));
      start = random_unit_vector(d, rng);
    }
    results[k] = run_start(t, alpha, start, cfg.max_iters);
  });

  OptReport rep;
  rep.starts = n;
  rep.seed = cfg.seed;
  rep.per_start_values.reserve(n);
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    rep.per_start_values.push_back(results[k].value);
    if (results[k].value < results[best].value - kTieTol) best = k;
    rep.converged = rep.converged || results[k].converged;
  }
  rep.best_start = best;
  rep.value = results[best].value;
  rep.arg_vector = results[best].psi;
  rep.arg_state = DensityMatrix::pure(results[best].psi);
  return rep;
}

double output_norm(const QuantumChannel& t, const Vector& psi) {
  return eigvals_hermitian(output_of(t, psi)).maxCoeff();
}

}  // namespace

void check_alpha(double alpha) {
  if (std::isnan(alpha) || alpha < 0.0) fail(ErrorKind::BadAlpha, "alpha must be >= 0");
}

double von_neumann(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Idx i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

double renyi_from_spectrum(const RealVector& eigenvalues, double alpha) {
  check_alpha(alpha);
  const RealVector lam = clamped(eigenvalues);
  if (alpha == 0.0) return std::log2(static_cast<double>(std::max<std::size_t>(rank_above(lam, kRankCutoff), 1)));
  // Roundoff can push a pure spectrum's entropy a few ulps below zero.
  if (std::isinf(alpha)) return std::max(0.0, -std::log2(lam.maxCoeff()));
  if (is_von_neumann(alpha)) return std::max(0.0, von_neumann(lam));
  double s = 0.0;
  for (Idx i = 0; i < lam.size(); ++i) {
    if (lam(i) > 0.0) s += std::pow(lam(i), alpha);
  }
  return std::max(0.0, std::log2(s) / (1.0 - alpha));
}

double renyi_entropy(const DensityMatrix& rho, double alpha) {
  return renyi_from_spectrum(rho.spectrum(), alpha);
}

OptReport min_output_entropy(const QuantumChannel& t, double alpha, const OptConfig& cfg,
                             const std::vector<Vector>& warm_starts) {
  check_alpha(alpha);
  return multistart(t, alpha, cfg, warm_starts);
}

OptReport max_output_norm(const QuantumChannel& t, const OptConfig& cfg, const std::vector<Vector>& warm_starts) {
  OptReport rep = multistart(t, kAlphaInf, cfg, warm_starts);
  // Internally minimized -log2 lambda_max; report the norm itself.
  rep.value = std::exp2(-rep.value);
  for (auto& v : rep.per_start_values) v = std::exp2(-v);
  return rep;
}

Vector refine_output_support(const QuantumChannel& t, const Vector& psi, std::size_t rank, std::size_t max_rounds) {
  const std::size_t d = t.dim();
  if (rank == 0 || rank >= d) return psi / psi.norm();
  Vector cur = psi / psi.norm();
  Vector best = cur;
  double best_weight = std::numeric_limits<double>::infinity();
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const auto eig = eig_hermitian(output_of(t, cur));
    const Idx outside = static_cast<Idx>(d - rank);
    double weight = 0.0;
    for (Idx i = 0; i < outside; ++i) weight += std::max(eig.values(i), 0.0);
    if (weight < best_weight) {
      const double gain = best_weight - weight;
      best_weight = weight;
      best = cur;
      if (gain < 1e-16) break;
    } else {
      break;
    }
    const Matrix q = eig.vectors.leftCols(outside) * eig.vectors.leftCols(outside).adjoint();
    const auto h = eig_hermitian(hermitian_part(t.apply_adjoint(q)));
    cur = h.vectors.col(0);
  }
  return best;
}

CharacterizationReport characterize(const QuantumChannel& t, const std::vector<double>& alpha_grid,
                                    const OptConfig& cfg) {
  if (alpha_grid.empty()) fail(ErrorKind::BadAlpha, "alpha grid must be nonempty");
  for (double a : alpha_grid) check_alpha(a);
  CharacterizationReport rep;
  rep.alpha_grid = alpha_grid;

  std::vector<Vector> candidates;
  for (double a : alpha_grid) {
    const OptReport r = min_output_entropy(t, a, cfg);
    rep.nu_values.push_back(r.value);
    candidates.push_back(r.arg_vector);
  }
  const auto [lo, hi] = std::minmax_element(rep.nu_values.begin(), rep.nu_values.end());
  rep.nu_spread = *hi - *lo;
  rep.constant_nu = rep.nu_spread <= cfg.tol_equiv;

  const OptReport norm = max_output_norm(t, cfg, candidates);
  candidates.insert(candidates.begin(), norm.arg_vector);

  // Largest output norm wins; near-ties go to the purest output.
  std::size_t pick = 0;
  double pick_norm = -1.0;
  double pick_purity = -1.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Matrix out = output_of(t, candidates[k]);
    const double nv = eigvals_hermitian(out).maxCoeff();
    const double pv = out.cwiseAbs2().sum();
    if (nv > pick_norm + 1e-7 || (std::abs(nv - pick_norm) <= 1e-7 && pv > pick_purity)) {
      pick = k;
      pick_norm = std::max(nv, pick_norm);
      pick_purity = pv;
    }
  }
  Vector witness = candidates[pick];
  const double raw_norm = output_norm(t, witness);
  const double inv = 1.0 / raw_norm;
  const auto rank = static_cast<std::size_t>(std::llround(inv));
  if (rank >= 1 && rank < t.dim() && std::abs(inv - static_cast<double>(rank)) <= 1e-3) {
    const Vector refined = refine_output_support(t, witness, rank);
    if (output_norm(t, refined) >= raw_norm - 1e-9) witness = refined;
  }
  rep.witness = witness;
  rep.max_norm = output_norm(t, witness);

  const Matrix out = output_of(t, witness);
  const ProjectionCheck pc = is_normalized_projection(out, 1e-6);
  rep.norm_at_projection = pc.is_projection;
  rep.projection_rank = pc.rank;

  try {
    rep.projective_form = extract_projective_form(t, DensityMatrix::pure(witness), rep.max_norm);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotProjectiveClass) throw;
    rep.extraction_error = e.what();
  }
  const bool p2 = rep.projective_form.has_value();
  rep.agreement = (rep.constant_nu == p2) && (p2 == rep.norm_at_projection);
  return rep;
}

}  // namespace projchan
