#include <gtest/gtest.h>

#include "oracles.hpp"
#include "projchan/channel.hpp"
#include "projchan/error.hpp"
#include "projchan/zoo.hpp"

using namespace projchan;

namespace {

Matrix unit(std::size_t d, std::size_t i, std::size_t j) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

QuantumChannel identity_channel(std::size_t d) { return QuantumChannel::from_kraus({identity(d)}); }

QuantumChannel wh(std::size_t d) { return zoo::build(zoo::WernerHolevo{d}).channel; }

/// (1/d) sum_ij T(E_ij) (x) E_ij through the loop oracle.
oracle::Mat oracle_choi(const QuantumChannel& t) {
  const std::size_t d = t.dim();
  const auto kraus = oracle::kraus_of(t.kraus());
  oracle::Mat j(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      const oracle::Mat e = oracle::from_eigen(unit(d, a, b));
      const oracle::Mat term = oracle::kron(oracle::apply_kraus(kraus, e), e);
      for (std::size_t k = 0; k < term.a.size(); ++k) j.a[k] += term.a[k] / static_cast<double>(d);
    }
  }
  return j;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(Validate, IdentityChannel) {
  const auto v = validate(identity_channel(3));
  EXPECT_TRUE(v.trace_preserving);
  EXPECT_TRUE(v.completely_positive);
  EXPECT_LE(v.tp_residual, 1e-14);
  EXPECT_GE(v.min_choi_eigenvalue, -1e-14);
}

TEST(Validate, ScaledIdentityIsNotTracePreserving) {
  const auto v = validate(QuantumChannel::from_kraus({0.9 * identity(2)}));
  EXPECT_FALSE(v.trace_preserving);
  EXPECT_NEAR(v.tp_residual, 0.19, 1e-12);
}

TEST(Validate, WernerHolevoChoiIsScaledAntisymmetricProjector) {
  const QuantumChannel t = wh(3);
  const auto v = validate(t);
  EXPECT_TRUE(v.valid());
  EXPECT_NEAR(v.min_choi_eigenvalue, 0.0, 1e-10);
  const Matrix expected = (identity(9) - flip(3)) / 6.0;
  EXPECT_LE(max_abs(t.choi() - expected), 1e-14);
  EXPECT_LE(oracle::max_abs_diff(oracle::from_eigen(t.choi()), oracle_choi(t)), 1e-14);
}

TEST(Construction, RejectsEmptyAndRaggedKraus) {
  EXPECT_EQ(kind_of([] { QuantumChannel::from_kraus({}); }), ErrorKind::BadDims);
  EXPECT_EQ(kind_of([] { QuantumChannel::from_kraus({identity(2), identity(3)}); }), ErrorKind::DimMismatch);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
  oracle::Gen gen(1);
  const Matrix rho = gen.state(3);
  EXPECT_LE(max_abs(identity_channel(3).apply(rho) - rho), 1e-15);
}

TEST(Apply, WernerHolevoOnBasisState) {
  const Matrix out = wh(3).apply(DensityMatrix::basis_state(3, 0)).matrix();
  EXPECT_LE(max_abs(out - (identity(3) - unit(3, 0, 0)) / 2.0), 1e-15);
}

TEST(Apply, WernerHolevoFixesMaximallyMixed) {
  EXPECT_LE(max_abs(wh(3).apply(identity(3) / 3.0) - identity(3) / 3.0), 1e-15);
}

TEST(Apply, MatchesLoopOracleOnRandomStates) {
  oracle::Gen gen(2);
  const QuantumChannel t = zoo::build(zoo::CasimirReducibleExample{}).channel;
  for (int k = 0; k < 10; ++k) {
    const Matrix rho = gen.state(4);
    EXPECT_LE(oracle::max_abs_diff(oracle::from_eigen(t.apply(rho)),
                                   oracle::apply_kraus(oracle::kraus_of(t.kraus()), oracle::from_eigen(rho))),
              1e-14);
  }
}

TEST(Apply, DimensionMismatch) {
  EXPECT_EQ(kind_of([] { wh(3).apply(identity(2) / 2.0); }), ErrorKind::DimMismatch);
}

TEST(Choi, KrausChoiKrausRoundTrip) {
  for (const auto& t : {wh(3), zoo::build(zoo::CoarseGraining{2, 2}).channel,
                        zoo::build(zoo::CasimirReducibleExample{}).channel}) {
    const QuantumChannel back = QuantumChannel::from_choi(t.dim(), t.choi());
    for (std::size_t i = 0; i < t.dim(); ++i) {
      for (std::size_t j = 0; j < t.dim(); ++j) {
        EXPECT_LE(max_abs(back.apply(unit(t.dim(), i, j)) - t.apply(unit(t.dim(), i, j))), 1e-9);
      }
    }
  }
}

TEST(TensorChannels, IdentitiesGiveIdentity) {
  const QuantumChannel t = tensor_channels({identity_channel(2), identity_channel(2)});
  ASSERT_EQ(t.dim(), 4u);
  oracle::Gen gen(3);
  const Matrix rho = gen.state(4);
  EXPECT_LE(max_abs(t.apply(rho) - rho), 1e-15);
}

TEST(TensorChannels, ProductInputFactorizes) {
  oracle::Gen gen(4);
  const QuantumChannel t = wh(3);
  const QuantumChannel tt = tensor_channels({t, t});
  const Matrix rho = gen.state(3);
  const Matrix sigma = gen.state(3);
  EXPECT_LE(max_abs(tt.apply(tensor(rho, sigma)) - tensor(t.apply(rho), t.apply(sigma))), 1e-15);
}

TEST(TensorChannels, EntangledInputMatchesOracle) {
  const QuantumChannel t = wh(3);
  const QuantumChannel tt = tensor_channels({t, t});
  std::vector<oracle::Mat> kraus;
  for (const auto& a : t.kraus())
    for (const auto& b : t.kraus()) kraus.push_back(oracle::kron(oracle::from_eigen(a), oracle::from_eigen(b)));
  const Matrix omega = max_entangled(3).matrix();
  const Matrix out = tt.apply(omega);
  EXPECT_LE(oracle::max_abs_diff(oracle::from_eigen(out), oracle::apply_kraus(kraus, oracle::from_eigen(omega))), 1e-15);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-14);
}

TEST(TensorChannels, ChoiIsPermutedTensorOfChois) {
  const QuantumChannel a = wh(3);
  const QuantumChannel b = zoo::build(zoo::CoarseGraining{2, 2}).channel;
  const QuantumChannel ab = tensor_channels({a, b});
  const Matrix expected = permute_systems(tensor(a.choi(), b.choi()), {3, 3, 4, 4}, {0, 2, 1, 3});
  EXPECT_LE(max_abs(ab.choi() - expected), 1e-12);
}

TEST(TensorChannels, DimensionOverflow) {
  EXPECT_EQ(kind_of([] { tensor_channels({wh(3), wh(3)}, 8); }), ErrorKind::DimensionOverflow);
}

TEST(ExtractProjectiveForm, WernerHolevoGivesTranspose) {
  const QuantumChannel t = wh(3);
  const ProjectiveForm f = extract_projective_form(t, DensityMatrix::basis_state(3, 0), 0.5);
  EXPECT_EQ(f.m, 1u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(max_abs(f.map.apply(unit(3, i, j)) - unit(3, j, i)), 1e-12);
  }
  EXPECT_LE(f.reconstruction_residual, 1e-8);
}

TEST(ExtractProjectiveForm, IdentityChannelFitsWithComplementMap) {
  // T = id has the form with m = d - 1 and M(X) = (tr X 1 - X) / (d - 1).
  for (std::size_t d : {2u, 3u}) {
    const ProjectiveForm f = extract_projective_form(identity_channel(d), DensityMatrix::basis_state(d, 0), 1.0);
    EXPECT_EQ(f.m, d - 1);
    EXPECT_LE(f.reconstruction_residual, 1e-12);
    const Matrix expected = identity(d) - unit(d, 0, 0);
    EXPECT_LE(max_abs(f.projector - expected), 1e-12);
  }
}

TEST(ExtractProjectiveForm, CoarseGrainingHasMEqualsD) {
  const auto built = zoo::build(zoo::CoarseGraining{2, 2});
  const ProjectiveForm f = extract_projective_form(built.channel, built.form->rho0, 0.5);
  EXPECT_EQ(f.m, 2u);
  const auto proj = is_normalized_projection(f.projector / 2.0, 1e-10);
  EXPECT_TRUE(proj.is_projection);
  EXPECT_EQ(proj.rank, 2u);
}

TEST(ExtractProjectiveForm, NonIntegerNormRejected) {
  EXPECT_EQ(kind_of([] { extract_projective_form(wh(3), DensityMatrix::basis_state(3, 0), 0.4); }),
            ErrorKind::NotProjectiveClass);
}

TEST(ExtractProjectiveForm, NonMaximizingWitnessRejected) {
  EXPECT_EQ(kind_of([] { extract_projective_form(wh(3), DensityMatrix::maximally_mixed(3), 0.5); }),
            ErrorKind::NotProjectiveClass);
}

TEST(ExtractProjectiveForm, OutOfRangeMRejected) {
  // Depolarizing to 1/d: norm 1/d gives m0 = d, outside 1 <= m0 < d.
  const QuantumChannel t = zoo::build(zoo::CompletelyDepolarizing{3}).channel;
  EXPECT_EQ(kind_of([&] { extract_projective_form(t, DensityMatrix::basis_state(3, 0), 1.0 / 3.0); }),
            ErrorKind::NotProjectiveClass);
}

TEST(Stinespring, IdentityHasTrivialEnvironment) {
  const Isometry u = stinespring(identity_channel(3));
  EXPECT_EQ(u.env_dim, 1u);
  EXPECT_LE(max_abs(u.mat - identity(3)), 1e-15);
}

TEST(Stinespring, EnvironmentDimensions) {
  EXPECT_EQ(stinespring(wh(3)).env_dim, 3u);
  EXPECT_EQ(stinespring(zoo::build(zoo::CasimirReducibleExample{}).channel).env_dim, 4u);
}

TEST(Stinespring, ReproducesChannelOnBasis) {
  for (const auto& t : {wh(3), zoo::build(zoo::CasimirReducibleExample{}).channel}) {
    const Isometry u = stinespring(t);
    EXPECT_LE(max_abs(u.mat.adjoint() * u.mat - identity(t.dim())), 1e-10);
    for (std::size_t i = 0; i < t.dim(); ++i) {
      for (std::size_t j = 0; j < t.dim(); ++j) {
        const Matrix big = u.mat * unit(t.dim(), i, j) * u.mat.adjoint();
        const Matrix reduced = partial_trace(big, {u.dim_out, u.env_dim}, {0});
        EXPECT_LE(max_abs(reduced - t.apply(unit(t.dim(), i, j))), 1e-10);
      }
    }
  }
}

TEST(PptChoi, IdentityIsNotPpt) {
  const auto r = is_ppt_choi(identity_channel(2));
  EXPECT_FALSE(r.ppt);
  EXPECT_NEAR(r.min_eigenvalue, -0.5, 1e-12);
}

TEST(PptChoi, ShiftsPinchingIsPpt) {
  EXPECT_TRUE(is_ppt_choi(zoo::build(zoo::ShiftsPinching{3, {1}}).channel).ppt);
}

TEST(PptChoi, CoarseGrainingIsNotPpt) {
  EXPECT_FALSE(is_ppt_choi(zoo::build(zoo::CoarseGraining{2, 2}).channel).ppt);
}

TEST(NormalizedProjection, Examples) {
  const auto a = is_normalized_projection(identity(4) / 4.0, 1e-12);
  EXPECT_TRUE(a.is_projection);
  EXPECT_EQ(a.rank, 4u);
  Matrix half = Matrix::Zero(3, 3);
  half(0, 0) = 0.5;
  half(1, 1) = 0.5;
  const auto b = is_normalized_projection(half, 1e-12);
  EXPECT_TRUE(b.is_projection);
  EXPECT_EQ(b.rank, 2u);
  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 0) = 0.6;
  skew(1, 1) = 0.4;
  EXPECT_FALSE(is_normalized_projection(skew, 1e-12).is_projection);
}
