#include "projchan/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <type_traits>

#include "projchan/error.hpp"

namespace projchan::zoo {

namespace {

using Idx = Eigen::Index;
Idx ix(std::size_t v) { return static_cast<Idx>(v); }

constexpr double kSpecTol = 1e-10;

Matrix unit(std::size_t d, std::size_t i, std::size_t j) {
  Matrix e = Matrix::Zero(ix(d), ix(d));
  e(ix(i), ix(j)) = 1.0;
  return e;
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::SpecInvalid, what);
}

void require_dim(std::size_t d, std::size_t min_d, const char* family) {
  require(d >= min_d, std::string(family) + ": d must be at least " + std::to_string(min_d));
  require(d <= 64, std::string(family) + ": d must be at most 64");
}

/// Channel T(X) = (1 tr X - m M(X)) / (d - m) with its projective form; the
/// witness rho0 is checked to give a rank-m projection.
BuiltChannel from_projective(std::size_t d, std::size_t m, const LinearMap& map, const Matrix& rho0) {
  const double dd = static_cast<double>(d);
  const double md = static_cast<double>(m);
  const Matrix jt = (identity(d * d) / dd - md * map.choi()) / (dd - md);
  BuiltChannel out;
  out.channel = QuantumChannel::from_choi(d, hermitian_part(jt));
  ProjectiveForm form;
  form.d = d;
  form.m = m;
  form.map = map;
  form.rho0 = DensityMatrix::from_matrix(rho0);
  form.projector = md * map.apply(rho0);
  check_projective_form(out.channel, form);
  out.form = std::move(form);
  return out;
}

Matrix transpose_of(const Matrix& x) { return x.transpose(); }

BuiltChannel build_one(const WernerHolevo& s) {
  require_dim(s.d, 2, "WernerHolevo");
  return from_projective(s.d, 1, LinearMap::transpose(s.d), unit(s.d, 0, 0));
}

BuiltChannel build_one(const Stretching& s) {
  require_dim(s.d, 2, "Stretching");
  require(s.lambda >= 0.0 && s.lambda <= 1.0, "Stretching: lambda must lie in [0, 1]");
  const Matrix omega = s.omega ? *s.omega : unit(s.d, 0, 0);
  require(omega.rows() == ix(s.d) && omega.cols() == ix(s.d), "Stretching: omega must be d x d");
  require(hermiticity_residual(omega) <= kSpecTol, "Stretching: omega must be Hermitian");
  require(std::abs(omega.trace().real() - 1.0) <= kSpecTol, "Stretching: omega must have unit trace");
  require(std::abs(omega.cwiseAbs2().sum() - 1.0) <= kSpecTol, "Stretching: omega must be pure");
  const double lambda = s.lambda;
  const auto map = LinearMap::from_action(s.d, [&](const Matrix& x) {
    return Matrix(lambda * x.transpose() + (1.0 - lambda) * x.trace() * omega);
  });
  return from_projective(s.d, 1, map, transpose_of(omega));
}

BuiltChannel build_one(const WeylShift& s) {
  require_dim(s.d, 2, "WeylShift");
  std::vector<Matrix> shifts;
  for (std::size_t i = 1; i <= s.d; ++i) shifts.push_back(weyl_shift(s.d, i));
  const double inv = 1.0 / static_cast<double>(s.d);
  const auto map = LinearMap::from_action(s.d, [&](const Matrix& x) {
    Matrix acc = Matrix::Zero(x.rows(), x.cols());
    const Matrix xt = x.transpose();
    for (const auto& w : shifts) acc += w * xt * w.adjoint();
    return Matrix(acc * inv);
  });
  const Vector f = flat_vector(s.d);
  return from_projective(s.d, 1, map, projector(f));
}

BuiltChannel build_one(const Pinching& s) {
  require_dim(s.d, 2, "Pinching");
  require(s.projections.size() >= 2, "Pinching: need at least two projections");
  Matrix sum = Matrix::Zero(ix(s.d), ix(s.d));
  for (std::size_t i = 0; i < s.projections.size(); ++i) {
    const Matrix& p = s.projections[i];
    require(p.rows() == ix(s.d) && p.cols() == ix(s.d), "Pinching: projections must be d x d");
    for (std::size_t j = 0; j < s.projections.size(); ++j) {
      const Matrix prod = p * s.projections[j];
      const Matrix expect = i == j ? p : Matrix::Zero(ix(s.d), ix(s.d));
      require(max_abs(prod - expect) <= kSpecTol, "Pinching: P_i P_j = delta_ij P_i violated");
    }
    require(max_abs(p - p.adjoint()) <= kSpecTol, "Pinching: projections must be Hermitian");
    sum += p;
  }
  require(max_abs(sum - identity(s.d)) <= kSpecTol, "Pinching: projections must sum to identity");

  const auto& projs = s.projections;
  const auto map = LinearMap::from_action(s.d, [&](const Matrix& x) {
    Matrix acc = Matrix::Zero(x.rows(), x.cols());
    const Matrix xt = x.transpose();
    for (const auto& p : projs) acc += p * xt * p;
    return acc;
  });
  // A unit vector in the range of the first projection; rho0 is its conjugate.
  const Matrix& p0 = projs.front();
  Vector v;
  for (Idx c = 0; c < p0.cols(); ++c) {
    if (p0.col(c).norm() > 0.5) {
      v = p0.col(c) / p0.col(c).norm();
      break;
    }
  }
  require(v.size() == ix(s.d), "Pinching: first projection is zero");
  return from_projective(s.d, 1, map, projector(v.conjugate()));
}

BuiltChannel build_one(const CasimirIrreducible& s) {
  require_dim(s.d, 2, "CasimirIrreducible");
  const auto gens = su2_generators(s.d);
  const double lambda = static_cast<double>((s.d - 1) * (s.d + 1)) / 4.0;
  std::vector<Matrix> kraus;
  for (const auto& j : gens) kraus.push_back(j / std::sqrt(lambda));
  return BuiltChannel{QuantumChannel::from_kraus(std::move(kraus)), std::nullopt};
}

BuiltChannel build_one(const CasimirReducibleExample&) {
  const auto gens = casimir_reducible_generators();
  // (3/4) A_i with A_i = sqrt(4/3) J_i gives Kraus operators J_i; the identity part carries weight 1/4.
  std::vector<Matrix> kraus(gens.begin(), gens.end());
  kraus.push_back(0.5 * identity(4));
  BuiltChannel out;
  out.channel = QuantumChannel::from_kraus(std::move(kraus));
  ProjectiveForm form;
  form.d = 4;
  form.m = 2;
  const QuantumChannel& t = out.channel;
  form.map = LinearMap::from_action(4, [&](const Matrix& x) { return Matrix(x.trace() * identity(4) / 2.0 - t.apply(x)); });
  form.rho0 = DensityMatrix::from_matrix(casimir_reducible_rho0());
  form.projector = 2.0 * form.map.apply(form.rho0.matrix());
  check_projective_form(out.channel, form);
  out.form = std::move(form);
  return out;
}

BuiltChannel build_one(const ShiftsPinching& s) {
  require_dim(s.d, 2, "ShiftsPinching");
  require(!s.K.empty(), "ShiftsPinching: K must be nonempty");
  std::set<std::size_t> uniq(s.K.begin(), s.K.end());
  require(uniq.size() == s.K.size(), "ShiftsPinching: K has repeated entries");
  for (auto k : s.K) require(k >= 1 && k <= s.d, "ShiftsPinching: K must be a subset of {1..d}");
  require(s.K.size() < s.d, "ShiftsPinching: |K| must be smaller than d");
  const std::size_t d = s.d;
  const auto K = s.K;
  const double inv = 1.0 / static_cast<double>(K.size());
  const auto map = LinearMap::from_action(d, [&](const Matrix& x) {
    Matrix acc = Matrix::Zero(ix(d), ix(d));
    for (auto k : K) {
      const Matrix w = weyl_shift(d, k);
      const Matrix y = w.adjoint() * x * w;
      for (std::size_t i = 0; i < d; ++i) acc(ix(i), ix(i)) += y(ix(i), ix(i));
    }
    return Matrix(acc * inv);
  });
  return from_projective(d, K.size(), map, unit(d, 0, 0));
}

BuiltChannel build_one(const CoarseGraining& s) {
  require(s.n >= 2 && s.D >= 1, "CoarseGraining: need n >= 2 and D >= 1");
  require(s.n * s.D <= 64, "CoarseGraining: n D must be at most 64");
  const std::size_t n = s.n;
  const std::size_t D = s.D;
  const std::size_t d = n * D;
  const auto map = LinearMap::from_action(d, [&](const Matrix& x) {
    const Matrix reduced = partial_trace(x, {n, D}, {0});
    const Matrix rt = reduced.transpose();
    const Matrix mixed = identity(D) / static_cast<double>(D);
    return tensor(rt, mixed);
  });
  return from_projective(d, D, map, projector(flat_vector(d)));
}

BuiltChannel build_one(const Diagonal& s) {
  require_dim(s.d, 1, "Diagonal");
  require(!s.diagonals.empty(), "Diagonal: need at least one Kraus diagonal");
  std::vector<double> weight(s.d, 0.0);
  std::vector<Matrix> kraus;
  for (const auto& a : s.diagonals) {
    require(a.size() == s.d, "Diagonal: each diagonal must have d entries");
    Matrix k = Matrix::Zero(ix(s.d), ix(s.d));
    for (std::size_t i = 0; i < s.d; ++i) {
      k(ix(i), ix(i)) = a[i];
      weight[i] += std::norm(a[i]);
    }
    kraus.push_back(std::move(k));
  }
  for (std::size_t i = 0; i < s.d; ++i) {
    require(std::abs(weight[i] - 1.0) <= kSpecTol,
            "Diagonal: sum_k |a_k(" + std::to_string(i) + ")|^2 must equal 1");
  }
  return BuiltChannel{QuantumChannel::from_kraus(std::move(kraus)), std::nullopt};
}

BuiltChannel build_one(const Identity& s) {
  require_dim(s.d, 1, "Identity");
  return BuiltChannel{QuantumChannel::from_kraus({identity(s.d)}), std::nullopt};
}

BuiltChannel build_one(const CompletelyDepolarizing& s) {
  require_dim(s.d, 1, "CompletelyDepolarizing");
  std::vector<Matrix> kraus;
  const double scale = 1.0 / std::sqrt(static_cast<double>(s.d));
  for (std::size_t i = 0; i < s.d; ++i) {
    for (std::size_t j = 0; j < s.d; ++j) kraus.push_back(unit(s.d, i, j) * scale);
  }
  return BuiltChannel{QuantumChannel::from_kraus(std::move(kraus)), std::nullopt};
}

}  // namespace

BuiltChannel build(const ChannelSpec& spec) {
  return std::visit([](const auto& s) { return build_one(s); }, spec);
}

std::string family_name(const ChannelSpec& spec) {
  struct Visitor {
    std::string operator()(const WernerHolevo&) const { return "WernerHolevo"; }
    std::string operator()(const Stretching&) const { return "Stretching"; }
    std::string operator()(const WeylShift&) const { return "WeylShift"; }
    std::string operator()(const Pinching&) const { return "Pinching"; }
    std::string operator()(const CasimirIrreducible&) const { return "CasimirIrreducible"; }
    std::string operator()(const CasimirReducibleExample&) const { return "CasimirReducibleExample"; }
    std::string operator()(const ShiftsPinching&) const { return "ShiftsPinching"; }
    std::string operator()(const CoarseGraining&) const { return "CoarseGraining"; }
    std::string operator()(const Diagonal&) const { return "Diagonal"; }
    std::string operator()(const Identity&) const { return "Identity"; }
    std::string operator()(const CompletelyDepolarizing&) const { return "CompletelyDepolarizing"; }
  };
  return std::visit(Visitor{}, spec);
}

std::size_t spec_dim(const ChannelSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CasimirReducibleExample>) {
          return 4;
        } else if constexpr (std::is_same_v<S, CoarseGraining>) {
          return s.n * s.D;
        } else {
          return s.d;
        }
      },
      spec);
}

std::array<Matrix, 3> su2_generators(std::size_t d) {
  if (d < 2) fail(ErrorKind::SpecInvalid, "su2_generators: d must be at least 2");
  const double j = static_cast<double>(d - 1) / 2.0;
  Matrix jp = Matrix::Zero(ix(d), ix(d));
  Matrix jz = Matrix::Zero(ix(d), ix(d));
  for (std::size_t k = 0; k < d; ++k) {
    const double m = j - static_cast<double>(k);
    jz(ix(k), ix(k)) = m;
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
    if (k > 0) jp(ix(k - 1), ix(k)) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Matrix jm = jp.adjoint();
  const Matrix jx = (jp + jm) / 2.0;
  const Matrix jy = (jp - jm) / cplx(0.0, 2.0);
  return {jx, jy, jz};
}

std::array<Matrix, 3> casimir_reducible_generators() {
  const cplx h(0.0, 0.5);
  auto e = [](std::size_t i, std::size_t j) { return unit(4, i, j); };
  return {
      Matrix(h * (e(1, 2) + e(3, 0) - e(0, 3) - e(2, 1))),
      Matrix(h * (e(2, 0) + e(3, 1) - e(0, 2) - e(1, 3))),
      Matrix(h * (e(0, 1) + e(3, 2) - e(1, 0) - e(2, 3))),
  };
}

std::array<Matrix, 3> casimir_reducible_commutant() {
  const cplx h(0.0, 0.5);
  auto e = [](std::size_t i, std::size_t j) { return unit(4, i, j); };
  return {
      Matrix(h * (e(0, 1) - e(1, 0) + e(2, 3) - e(3, 2))),
      Matrix(h * (e(0, 2) - e(2, 0) - e(1, 3) + e(3, 1))),
      Matrix(h * (e(0, 3) - e(3, 0) + e(1, 2) - e(2, 1))),
  };
}

Matrix casimir_reducible_rho0() {
  Matrix r = Matrix::Zero(4, 4);
  r(0, 0) = 0.5;
  r(0, 3) = cplx(0.0, 0.5);
  r(3, 0) = cplx(0.0, -0.5);
  r(3, 3) = 0.5;
  return r;
}

Matrix weyl_shift(std::size_t d, std::size_t i) {
  Matrix w = Matrix::Zero(ix(d), ix(d));
  for (std::size_t j = 0; j < d; ++j) w(ix((j + i) % d), ix(j)) = 1.0;
  return w;
}

Matrix weyl_phase(std::size_t d, std::size_t j) {
  Matrix u = Matrix::Zero(ix(d), ix(d));
  for (std::size_t k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) / static_cast<double>(d);
    u(ix(k), ix(k)) = std::polar(1.0, angle);
  }
  return u;
}

std::vector<Matrix> heisenberg_group(std::size_t d) {
  std::vector<Matrix> g;
  g.reserve(d * d * d);
  for (std::size_t c = 0; c < d; ++c) {
    const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(d));
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) g.push_back(phase * weyl_shift(d, a) * weyl_phase(d, b));
    }
  }
  return g;
}

std::vector<Matrix> block_projections(const std::vector<std::size_t>& blocks) {
  std::size_t d = 0;
  for (auto b : blocks) {
    if (b == 0) fail(ErrorKind::SpecInvalid, "Pinching: block sizes must be positive");
    d += b;
  }
  std::vector<Matrix> out;
  std::size_t start = 0;
  for (auto b : blocks) {
    Matrix p = Matrix::Zero(ix(d), ix(d));
    for (std::size_t k = start; k < start + b; ++k) p(ix(k), ix(k)) = 1.0;
    out.push_back(std::move(p));
    start += b;
  }
  return out;
}

Vector flat_vector(std::size_t d) {
  return Vector::Constant(ix(d), cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
}

}  // namespace projchan::zoo
