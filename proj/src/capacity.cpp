#include "projchan/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "projchan/error.hpp"
#include "projchan/parallel.hpp"
#include "projchan/random.hpp"

namespace projchan {

namespace {

using Idx = Eigen::Index;
constexpr double kPi = std::numbers::pi;

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum 2
};

template <unsigned N>
Rule boost_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  Rule r;
  // Boost stores the nonnegative half; a zero node (odd N) appears once.
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[k]);
    } else {
      r.nodes.push_back(-a[k]);
      r.weights.push_back(w[k]);
      r.nodes.push_back(a[k]);
      r.weights.push_back(w[k]);
    }
  }
  return r;
}

Rule gauss_legendre(std::size_t n) {
  switch (n) {
    case 1: return Rule{{0.0}, {2.0}};
    case 4: return boost_rule<4>();
    case 8: return boost_rule<8>();
    case 16: return boost_rule<16>();
    case 24: return boost_rule<24>();
    case 32: return boost_rule<32>();
    case 48: return boost_rule<48>();
    case 64: return boost_rule<64>();
    default: fail(ErrorKind::SpecInvalid, "quadrature size must be one of 1, 4, 8, 16, 24, 32, 48, 64");
  }
}

/// exp(i x G) for Hermitian G, from a fixed eigendecomposition.
struct ExpGenerator {
  HermitianEig eig;
  explicit ExpGenerator(const Matrix& g) : eig(eig_hermitian(g)) {}
  Matrix operator()(double x) const {
    Vector phases(eig.values.size());
    for (Idx k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, x * eig.values(k));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  }
};

std::vector<GroupElement> su2_elements(const SU2Euler& s) {
  const Idx d = s.generators[0].rows();
  for (const auto& g : s.generators) {
    if (g.rows() != d || g.cols() != d) fail(ErrorKind::SpecInvalid, "SU(2) generators must share one square shape");
  }
  const ExpGenerator e1(s.generators[0]);
  const ExpGenerator e2(s.generators[1]);
  const ExpGenerator e3(s.generators[2]);
  const Rule r1 = gauss_legendre(s.grid[0]);
  const Rule r2 = gauss_legendre(s.grid[1]);
  const Rule r3 = gauss_legendre(s.grid[2]);
  const std::array<double, 3> len{4.0 * kPi, kPi, 2.0 * kPi};
  std::vector<GroupElement> out;
  out.reserve(r1.nodes.size() * r2.nodes.size() * r3.nodes.size());
  for (std::size_t a = 0; a < r1.nodes.size(); ++a) {
    const double x1 = (r1.nodes[a] + 1.0) * len[0] / 2.0;
    const bool zyz = s.convention == EulerConvention::ZYZ;
    const Matrix u1 = zyz ? e3(x1) : e1(x1);
    for (std::size_t b = 0; b < r2.nodes.size(); ++b) {
      const double x2 = (r2.nodes[b] + 1.0) * len[1] / 2.0;
      const Matrix u21 = zyz ? Matrix(u1 * e2(x2)) : Matrix(e2(x2) * u1);
      for (std::size_t c = 0; c < r3.nodes.size(); ++c) {
        const double x3 = (r3.nodes[c] + 1.0) * len[2] / 2.0;
        const double w = r1.weights[a] * len[0] / 2.0 * r2.weights[b] * len[1] / 2.0 * r3.weights[c] * len[2] / 2.0 *
                         std::sin(x2) / (16.0 * kPi * kPi);
        out.push_back({u21 * e3(x3), w});
      }
    }
  }
  return out;
}

std::vector<GroupElement> block_haar_elements(const BlockUnitaryHaar& s) {
  if (s.n == 0 || s.D == 0 || s.samples == 0) fail(ErrorKind::SpecInvalid, "BlockUnitaryHaar needs n, D, samples > 0");
  std::vector<Matrix> clock_shift;
  for (std::size_t a = 0; a < s.n; ++a) {
    for (std::size_t b = 0; b < s.n; ++b) clock_shift.push_back(zoo::weyl_shift(s.n, a) * zoo::weyl_phase(s.n, b));
  }
  const Matrix id_d = identity(s.D);
  const double w = 1.0 / static_cast<double>(s.samples * clock_shift.size());
  std::vector<GroupElement> out;
  out.reserve(s.samples * clock_shift.size());
  for (std::size_t k = 0; k < s.samples; ++k) {
    Rng rng(derive_seed(s.seed, k));
    const Matrix v = haar_unitary(s.n, rng);
    for (const auto& p : clock_shift) {
      Matrix u = p * v;
      if (s.conjugate) u = u.conjugate().eval();
      out.push_back({tensor(u, id_d), w});
    }
  }
  return out;
}

/// Indices of the elements used for the covariance check.
std::vector<std::size_t> covariance_indices(const TwirlSpec& g, std::size_t count) {
  if (std::holds_alternative<FiniteGroup>(g) || count <= kCovarianceSamples) {
    std::vector<std::size_t> all(count);
    for (std::size_t k = 0; k < count; ++k) all[k] = k;
    return all;
  }
  std::uint64_t seed = 0x5eed;
  if (const auto* b = std::get_if<BlockUnitaryHaar>(&g)) seed = b->seed;
  Rng rng(derive_seed(seed, 0xC0FFEE));
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < kCovarianceSamples; ++k) idx.push_back(pick(rng));
  return idx;
}

bool same_parameterization(const TwirlSpec& a, const TwirlSpec& b) {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<FiniteGroup>(&a)) return fa->unitaries.size() == std::get<FiniteGroup>(b).unitaries.size();
  if (const auto* sa = std::get_if<SU2Euler>(&a)) {
    const auto& sb = std::get<SU2Euler>(b);
    return sa->grid == sb.grid && sa->convention == sb.convention;
  }
  const auto& ha = std::get<BlockUnitaryHaar>(a);
  const auto& hb = std::get<BlockUnitaryHaar>(b);
  return ha.n == hb.n && ha.D == hb.D && ha.samples == hb.samples && ha.seed == hb.seed;
}

double entropy_bits(const Matrix& rho) {
  return renyi_from_spectrum(eigvals_hermitian(hermitian_part(rho)), 1.0);
}

}  // namespace

bool check_ensemble(const Ensemble& e, std::size_t d) {
  if (e.probs.size() != e.states.size() || e.probs.empty()) fail(ErrorKind::InvalidState, "ensemble lengths differ or are zero");
  double total = 0.0;
  for (double p : e.probs) {
    if (!(p >= 0.0)) fail(ErrorKind::InvalidState, "negative ensemble probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::InvalidState, "ensemble probabilities do not sum to 1");
  for (const auto& s : e.states) {
    if (s.dim() != d) fail(ErrorKind::DimMismatch, "ensemble state dimension differs from channel");
  }
  return e.probs.size() > d * d;
}

double holevo_chi(const QuantumChannel& t, const Ensemble& e) {
  check_ensemble(e, t.dim());
  Matrix avg = Matrix::Zero(static_cast<Idx>(t.dim()), static_cast<Idx>(t.dim()));
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < e.probs.size(); ++i) {
    const Matrix out = t.apply(e.states[i].matrix());
    avg += e.probs[i] * out;
    mean_entropy += e.probs[i] * entropy_bits(out);
  }
  return std::max(0.0, entropy_bits(avg) - mean_entropy);
}

std::vector<GroupElement> group_elements(const TwirlSpec& g) {
  if (const auto* f = std::get_if<FiniteGroup>(&g)) {
    if (f->unitaries.empty()) fail(ErrorKind::SpecInvalid, "finite group is empty");
    std::vector<GroupElement> out;
    const double w = 1.0 / static_cast<double>(f->unitaries.size());
    for (const auto& u : f->unitaries) out.push_back({u, w});
    return out;
  }
  if (const auto* s = std::get_if<SU2Euler>(&g)) return su2_elements(*s);
  return block_haar_elements(std::get<BlockUnitaryHaar>(g));
}

std::size_t twirl_dim(const TwirlSpec& g) {
  if (const auto* f = std::get_if<FiniteGroup>(&g)) return f->unitaries.empty() ? 0 : static_cast<std::size_t>(f->unitaries.front().rows());
  if (const auto* s = std::get_if<SU2Euler>(&g)) return static_cast<std::size_t>(s->generators[0].rows());
  const auto& b = std::get<BlockUnitaryHaar>(g);
  return b.n * b.D;
}

std::string twirl_name(const TwirlSpec& g) {
  if (const auto* f = std::get_if<FiniteGroup>(&g)) return "FiniteGroup(" + std::to_string(f->unitaries.size()) + ")";
  if (const auto* s = std::get_if<SU2Euler>(&g)) {
    return std::string(s->convention == EulerConvention::ZYZ ? "SU2EulerZYZ(" : "SU2Euler(") + std::to_string(s->grid[0]) +
           "x" + std::to_string(s->grid[1]) + "x" + std::to_string(s->grid[2]) + ")";
  }
  const auto& b = std::get<BlockUnitaryHaar>(g);
  return std::string("BlockUnitaryHaar(n=") + std::to_string(b.n) + ",D=" + std::to_string(b.D) +
         ",samples=" + std::to_string(b.samples) + (b.conjugate ? ",conjugate)" : ")");
}

void check_finite_group(const FiniteGroup& g) {
  if (g.unitaries.empty()) fail(ErrorKind::SpecInvalid, "finite group is empty");
  const Idx d = g.unitaries.front().rows();
  for (const auto& u : g.unitaries) {
    if (u.rows() != d || u.cols() != d) fail(ErrorKind::SpecInvalid, "group elements must share one square shape");
    if (max_abs(u * u.adjoint() - Matrix::Identity(d, d)) > 1e-10) fail(ErrorKind::SpecInvalid, "group element is not unitary");
  }
  for (const auto& a : g.unitaries) {
    for (const auto& b : g.unitaries) {
      const Matrix prod = a * b;
      const bool found = std::any_of(g.unitaries.begin(), g.unitaries.end(),
                                     [&](const Matrix& c) { return max_abs(prod - c) <= 1e-8; });
      if (!found) fail(ErrorKind::SpecInvalid, "finite group is not closed under products");
    }
  }
}

Matrix twirl(const Matrix& rho, const TwirlSpec& g) {
  const auto elems = group_elements(g);
  if (static_cast<std::size_t>(rho.rows()) != twirl_dim(g)) fail(ErrorKind::DimMismatch, "twirl dimension differs from operator");
  Matrix avg = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : elems) avg.noalias() += e.weight * (e.u * rho * e.u.adjoint());
  return avg;
}

OrbitAverage orbit_average(const QuantumChannel& t, const DensityMatrix& rho0, const TwirlSpec& g) {
  if (rho0.dim() != t.dim()) fail(ErrorKind::DimMismatch, "state dimension differs from channel");
  OrbitAverage r;
  r.avg_output = hermitian_part(twirl(t.apply(rho0.matrix()), g));
  r.average_residual = max_abs(r.avg_output - identity(t.dim()) / static_cast<double>(t.dim()));
  return r;
}

CovarianceCheck verify_weak_covariance(const QuantumChannel& t, const DensityMatrix& rho0, const TwirlSpec& pi,
                                       const TwirlSpec& Pi) {
  if (!same_parameterization(pi, Pi)) fail(ErrorKind::SpecMismatch, "pi and Pi must use the same group sampling");
  if (twirl_dim(pi) != t.dim() || twirl_dim(Pi) != t.dim()) fail(ErrorKind::DimMismatch, "representation dimension differs from channel");
  const auto a = group_elements(pi);
  const auto b = group_elements(Pi);
  const Matrix out0 = t.apply(rho0.matrix());
  const auto idx = covariance_indices(pi, a.size());
  std::vector<double> res(idx.size());
  parallel_for(idx.size(), [&](std::size_t k) {
    const Matrix& u = a[idx[k]].u;
    const Matrix& v = b[idx[k]].u;
    res[k] = max_abs(t.apply(u * rho0.matrix() * u.adjoint()) - v * out0 * v.adjoint());
  });
  CovarianceCheck c;
  c.samples = idx.size();
  for (double r : res) c.covariance_residual = std::max(c.covariance_residual, r);
  c.average_residual = orbit_average(t, rho0, Pi).average_residual;
  return c;
}

CapacityReport capacity_weakcov(const QuantumChannel& t, const DensityMatrix& rho0, const TwirlSpec& pi,
                                const TwirlSpec& Pi, const OptConfig& cfg) {
  const CovarianceCheck cov = verify_weak_covariance(t, rho0, pi, Pi);
  if (cov.covariance_residual > kCovarianceTol || cov.average_residual > kCovarianceTol) {
    fail(ErrorKind::NotWeaklyCovariant, "covariance residual " + std::to_string(cov.covariance_residual) +
                                            ", average residual " + std::to_string(cov.average_residual));
  }
  CapacityReport rep;
  rep.covariance_residual = cov.covariance_residual;
  rep.average_residual = cov.average_residual;
  const Matrix rho_bar = twirl(rho0.matrix(), pi);
  rep.max_term = entropy_bits(t.apply(rho_bar));
  rep.rho0_entropy = entropy_bits(t.apply(rho0.matrix()));
  const OptReport nu = min_output_entropy(t, 1.0, cfg, {rho0.dominant_vector()});
  rep.min_term = nu.value;
  if (rep.rho0_entropy > rep.min_term + kCovarianceTol) {
    fail(ErrorKind::OptimalStateMismatch, "S(T(rho0)) = " + std::to_string(rep.rho0_entropy) +
                                              " exceeds the minimal output entropy estimate " + std::to_string(rep.min_term));
  }
  rep.capacity = rep.max_term - rep.min_term;
  return rep;
}

CovarianceSetup auto_covariance_setup(const zoo::ChannelSpec& spec, const zoo::BuiltChannel& built, std::uint64_t seed) {
  const std::size_t d = built.channel.dim();
  auto shifts = [&] {
    FiniteGroup g;
    for (std::size_t i = 0; i < d; ++i) g.unitaries.push_back(zoo::weyl_shift(d, i));
    return g;
  };
  auto conjugated = [](FiniteGroup g) {
    for (auto& u : g.unitaries) u = u.conjugate().eval();
    return g;
  };
  const DensityMatrix basis0 = DensityMatrix::basis_state(d, 0);
  const DensityMatrix flat = DensityMatrix::pure(zoo::flat_vector(d));

  return std::visit(
      [&](const auto& s) -> CovarianceSetup {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, zoo::WernerHolevo>) {
          FiniteGroup g{zoo::heisenberg_group(d)};
          return {basis0, g, conjugated(g), "Heisenberg group; Pi = conj(pi)"};
        } else if constexpr (std::is_same_v<S, zoo::WeylShift>) {
          FiniteGroup g;
          for (std::size_t j = 0; j < d; ++j) g.unitaries.push_back(zoo::weyl_phase(d, j));
          return {flat, g, conjugated(g), "Weyl phases U_j; Pi = conj(pi)"};
        } else if constexpr (std::is_same_v<S, zoo::Pinching>) {
          return {built.form->rho0, shifts(), shifts(), "cyclic shifts W_i; Pi = pi"};
        } else if constexpr (std::is_same_v<S, zoo::CasimirIrreducible>) {
          const SU2Euler g{zoo::su2_generators(d), {32, 32, 32}, EulerConvention::ZYZ};
          return {basis0, g, g, "spin-j SU(2), z-y-z Euler quadrature; Pi = pi"};
        } else if constexpr (std::is_same_v<S, zoo::CasimirReducibleExample>) {
          const SU2Euler g{zoo::casimir_reducible_commutant(), {32, 32, 32}};
          return {built.form->rho0, g, g, "commuting SU(2) on the multiplicity factor, Euler quadrature; Pi = pi"};
        } else if constexpr (std::is_same_v<S, zoo::CoarseGraining>) {
          const BlockUnitaryHaar g{s.n, s.D, 512, seed, false};
          BlockUnitaryHaar gc = g;
          gc.conjugate = true;
          return {flat, g, gc, "V (x) 1_D with Haar V; Pi = conj(V) (x) 1_D"};
        } else {
          // Stretching, ShiftsPinching, Diagonal, Identity, CompletelyDepolarizing.
          return {basis0, shifts(), shifts(), "cyclic shifts W_i; Pi = pi"};
        }
      },
      spec);
}

ChiBoundReport chi_product_bound_check(const QuantumChannel& t, double capacity, std::size_t trials,
                                       const OptConfig& cfg) {
  const QuantumChannel tt = tensor_channels({t, t});
  const std::size_t d2 = tt.dim();
  const std::size_t max_size = d2 * d2;
  std::vector<double> chis(trials, 0.0);
  parallel_for(trials, [&](std::size_t k) {
    Rng rng(derive_seed(cfg.seed, k));
    std::uniform_int_distribution<std::size_t> size_dist(2, max_size);
    const std::size_t n = size_dist(rng);
    Ensemble e;
    for (std::size_t i = 0; i < n; ++i) e.states.push_back(DensityMatrix::pure(random_unit_vector(d2, rng)));
    e.probs = random_simplex(n, rng);
    // Re-normalize against the 1e-12 sum check.
    double total = 0.0;
    for (double p : e.probs) total += p;
    for (double& p : e.probs) p /= total;
    chis[k] = holevo_chi(tt, e);
  });
  ChiBoundReport rep;
  rep.trials = trials;
  rep.bound = 2.0 * capacity;
  for (double c : chis) rep.max_chi = std::max(rep.max_chi, c);
  rep.max_excess = rep.max_chi - rep.bound;
  return rep;
}

}  // namespace projchan
