#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "oracles.hpp"
#include "projchan/entropy.hpp"
#include "projchan/error.hpp"
#include "projchan/zoo.hpp"

using namespace projchan;

namespace {

const std::vector<double> kGrid{0.0, 0.5, 1.0, 2.0, 5.0, kAlphaInf};

DensityMatrix diag_state(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) m(k, k) = x, ++k;
  return DensityMatrix::from_matrix(m);
}

OptConfig quick(std::size_t starts = 16) {
  OptConfig c;
  c.starts = starts;
  return c;
}

QuantumChannel wh3() { return zoo::build(zoo::WernerHolevo{3}).channel; }

}  // namespace

TEST(Renyi, MaximallyMixedGivesLogDimension) {
  for (std::size_t d : {2u, 3u, 5u}) {
    for (double a : kGrid) EXPECT_NEAR(renyi_entropy(DensityMatrix::maximally_mixed(d), a), std::log2(d), 1e-12);
  }
}

TEST(Renyi, PureStateGivesZero) {
  oracle::Gen gen(1);
  const DensityMatrix psi = DensityMatrix::pure(gen.unit_vector(4));
  // Roundoff eigenvalues near 1e-16 contribute their alpha-th power below order one.
  for (double a : kGrid) EXPECT_NEAR(renyi_entropy(psi, a), 0.0, (a > 0.0 && a < 1.0) ? 1e-7 : 1e-10) << a;
  const DensityMatrix basis = DensityMatrix::pure(Vector::Unit(4, 2));
  for (double a : kGrid) EXPECT_EQ(renyi_entropy(basis, a), 0.0) << a;
}

TEST(Renyi, CollisionEntropyOfSkewedState) {
  EXPECT_NEAR(renyi_entropy(diag_state({0.5, 0.25, 0.25}), 2.0), 3.0 - std::log2(3.0), 1e-12);
}

TEST(Renyi, MatchesOracleOnRandomStates) {
  oracle::Gen gen(2);
  for (int k = 0; k < 50; ++k) {
    const Matrix rho = gen.state(4);
    for (double a : kGrid) {
      EXPECT_NEAR(renyi_entropy(DensityMatrix::from_matrix(rho), a), oracle::entropy_of(rho, a), 1e-10);
    }
  }
}

TEST(Renyi, VonNeumannBandAroundOne) {
  const DensityMatrix rho = diag_state({0.7, 0.2, 0.1});
  EXPECT_EQ(renyi_entropy(rho, 1.0 + 5e-7), renyi_entropy(rho, 1.0));
  EXPECT_NE(renyi_entropy(rho, 1.0 + 1e-3), renyi_entropy(rho, 1.0));
}

TEST(Renyi, RankCutoffForOrderZero) {
  EXPECT_NEAR(renyi_entropy(diag_state({1.0 - 1e-11, 1e-11}), 0.0), 0.0, 1e-15);
  EXPECT_NEAR(renyi_entropy(diag_state({1.0 - 1e-9, 1e-9}), 0.0), 1.0, 1e-15);
}

TEST(Renyi, NegativeOrderRejected) {
  try {
    renyi_entropy(DensityMatrix::maximally_mixed(2), -0.5);
    FAIL() << "expected BadAlpha";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadAlpha);
  }
}

TEST(Renyi, MonotoneInOrder) {
  oracle::Gen gen(3);
  for (int k = 0; k < 200; ++k) {
    const DensityMatrix rho = DensityMatrix::from_matrix(gen.state(3));
    for (std::size_t i = 0; i + 1 < kGrid.size(); ++i) {
      EXPECT_LE(renyi_entropy(rho, kGrid[i + 1]), renyi_entropy(rho, kGrid[i]) + 1e-12);
    }
  }
}

TEST(Renyi, FlatSpectrumIsOrderIndependent) {
  Matrix p = Matrix::Zero(5, 5);
  for (int k = 0; k < 3; ++k) p(k, k) = 1.0 / 3.0;
  const DensityMatrix flat = DensityMatrix::from_matrix(p);
  for (double a : kGrid) EXPECT_NEAR(renyi_entropy(flat, a), std::log2(3.0), 1e-12);
  const DensityMatrix skew = diag_state({0.6, 0.3, 0.1});
  EXPECT_GT(renyi_entropy(skew, 0.5), renyi_entropy(skew, 2.0));
}

TEST(MinOutputEntropy, WernerHolevoAcrossOrders) {
  const QuantumChannel t = wh3();
  std::vector<double> values;
  for (double a : kGrid) {
    const OptReport r = min_output_entropy(t, a, quick());
    EXPECT_NEAR(r.value, 1.0, 1e-6) << "alpha " << a;
    values.push_back(r.value);
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  EXPECT_LE(*hi - *lo, 2e-6);
}

TEST(MinOutputEntropy, IdentityChannelIsZero) {
  const QuantumChannel id = QuantumChannel::from_kraus({identity(3)});
  EXPECT_NEAR(min_output_entropy(id, 1.0, quick(4)).value, 0.0, 1e-9);
}

TEST(MinOutputEntropy, CoarseGrainingIsOneBit) {
  const QuantumChannel t = zoo::build(zoo::CoarseGraining{2, 2}).channel;
  EXPECT_NEAR(min_output_entropy(t, 1.0, quick()).value, 1.0, 1e-6);
}

TEST(MinOutputEntropy, ReportIsSelfConsistent) {
  const QuantumChannel t = zoo::build(zoo::WeylShift{3}).channel;
  for (double a : {0.5, 1.0, 2.0}) {
    const OptReport r = min_output_entropy(t, a, quick(8));
    EXPECT_EQ(r.per_start_values.size(), 8u);
    const double lo = *std::min_element(r.per_start_values.begin(), r.per_start_values.end());
    EXPECT_EQ(r.value, r.per_start_values[r.best_start]);
    EXPECT_LE(r.value, lo + 1e-12);
    for (std::size_t k = 0; k < r.best_start; ++k) EXPECT_GT(r.per_start_values[k], lo + 1e-12);
    EXPECT_NEAR(oracle::entropy_of(t.apply(r.arg_state.matrix()), a), r.value, 1e-9);
    EXPECT_NEAR(r.arg_state.purity(), 1.0, 1e-10);
  }
}

TEST(MinOutputEntropy, MoreStartsNeverWorse) {
  const QuantumChannel t = zoo::build(zoo::CasimirIrreducible{4}).channel;
  const OptReport small = min_output_entropy(t, 2.0, quick(4));
  const OptReport big = min_output_entropy(t, 2.0, quick(8));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(small.per_start_values[k], big.per_start_values[k]);
  EXPECT_LE(big.value, small.value);
}

TEST(MinOutputEntropy, IndependentOfWorkerCount) {
  const QuantumChannel t = wh3();
  setenv("PROJCHAN_THREADS", "1", 1);
  const OptReport serial = min_output_entropy(t, 5.0, quick(8));
  setenv("PROJCHAN_THREADS", "4", 1);
  const OptReport threaded = min_output_entropy(t, 5.0, quick(8));
  unsetenv("PROJCHAN_THREADS");
  EXPECT_EQ(serial.per_start_values, threaded.per_start_values);
  EXPECT_EQ(serial.best_start, threaded.best_start);
}

TEST(MaxOutputNorm, WernerHolevoIsOneHalf) { EXPECT_NEAR(max_output_norm(wh3(), quick()).value, 0.5, 1e-9); }

TEST(MaxOutputNorm, IdentityIsOne) {
  EXPECT_NEAR(max_output_norm(QuantumChannel::from_kraus({identity(3)}), quick(4)).value, 1.0, 1e-9);
}

TEST(MaxOutputNorm, CasimirReducibleIsOneHalfAtRankTwoProjection) {
  const QuantumChannel t = zoo::build(zoo::CasimirReducibleExample{}).channel;
  const OptReport r = max_output_norm(t, quick());
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  const auto proj = is_normalized_projection(t.apply(r.arg_state.matrix()), 1e-6);
  EXPECT_TRUE(proj.is_projection);
  EXPECT_EQ(proj.rank, 2u);
}

TEST(Characterize, WernerHolevoAllPredicatesTrue) {
  const CharacterizationReport r = characterize(wh3(), {0.0, 1.0, 2.0, kAlphaInf}, quick());
  EXPECT_TRUE(r.constant_nu);
  EXPECT_TRUE(r.norm_at_projection);
  ASSERT_TRUE(r.projective_form.has_value());
  EXPECT_EQ(r.projective_form->m, 1u);
  EXPECT_TRUE(r.agreement);
}

TEST(Characterize, QubitIdentityIsABoundaryMember) {
  // The identity fits the projective form with m = d - 1 and M(X) = tr X 1 - X.
  const QuantumChannel id = QuantumChannel::from_kraus({identity(2)});
  const CharacterizationReport r = characterize(id, {0.0, 1.0, 2.0, kAlphaInf}, quick(8));
  EXPECT_TRUE(r.constant_nu);
  for (double v : r.nu_values) EXPECT_NEAR(v, 0.0, 1e-9);
  EXPECT_TRUE(r.norm_at_projection);
  EXPECT_EQ(r.projection_rank, 1u);
  ASSERT_TRUE(r.projective_form.has_value());
  EXPECT_EQ(r.projective_form->m, 1u);
  EXPECT_TRUE(r.agreement);
}

TEST(Characterize, CompletelyDepolarizingHasConstantEntropyButNoForm) {
  const QuantumChannel t = zoo::build(zoo::CompletelyDepolarizing{3}).channel;
  const CharacterizationReport r = characterize(t, {0.0, 1.0, 2.0, kAlphaInf}, quick(8));
  EXPECT_TRUE(r.constant_nu);
  for (double v : r.nu_values) EXPECT_NEAR(v, std::log2(3.0), 1e-9);
  EXPECT_TRUE(r.norm_at_projection);
  EXPECT_EQ(r.projection_rank, 3u);
  EXPECT_FALSE(r.projective_form.has_value());
  EXPECT_FALSE(r.extraction_error.empty());
  EXPECT_FALSE(r.agreement);
}

TEST(Characterize, StretchingHasAllPredicates) {
  const QuantumChannel t = zoo::build(zoo::Stretching{3, 0.5, std::nullopt}).channel;
  const CharacterizationReport r = characterize(t, {0.0, 1.0, 2.0, kAlphaInf}, quick());
  EXPECT_TRUE(r.constant_nu);
  EXPECT_TRUE(r.projective_form.has_value());
}
