#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "projchan/channel.hpp"
#include "projchan/entropy.hpp"
#include "projchan/zoo.hpp"

namespace projchan {

struct Ensemble {
  std::vector<double> probs;
  std::vector<DensityMatrix> states;
};

/// Throws InvalidState unless probabilities are nonnegative, sum to 1 within
/// 1e-12 and all states share dimension `d`. Returns true when the ensemble has
/// more than d^2 members (allowed, but never needed for the optimum).
bool check_ensemble(const Ensemble& e, std::size_t d);

/// chi = S(sum p_i T(rho_i)) - sum p_i S(T(rho_i)), in bits.
double holevo_chi(const QuantumChannel& t, const Ensemble& e);

// ----------------------------------------------------------------- twirls

struct FiniteGroup {
  std::vector<Matrix> unitaries;
};

enum class EulerConvention {
  /// U_x = exp(i x2 G2) exp(i x1 G1) exp(i x3 G3).
  Printed,
  /// U_x = exp(i x1 G3) exp(i x2 G2) exp(i x3 G3), the Haar-exact z-y-z form.
  ZYZ,
};

/// Euler-angle integral over x1 in [0,4pi], x2 in [0,pi], x3 in [0,2pi] with
/// density sin(x2) / (16 pi^2), Gauss-Legendre nodes per axis.
struct SU2Euler {
  std::array<Matrix, 3> generators;
  std::array<std::size_t, 3> grid{32, 32, 32};
  EulerConvention convention = EulerConvention::Printed;
};

/// V (x) 1_D for Haar-random V in U(n) (conj(V) (x) 1_D when conjugate). Every
/// draw is combined with the n^2 clock-and-shift operators, so the average of
/// any operator over each coset is exact.
struct BlockUnitaryHaar {
  std::size_t n = 2;
  std::size_t D = 2;
  std::size_t samples = 512;
  std::uint64_t seed = 12648430;
  bool conjugate = false;
};

using TwirlSpec = std::variant<FiniteGroup, SU2Euler, BlockUnitaryHaar>;

struct GroupElement {
  Matrix u;
  double weight = 0.0;
};

/// All weighted elements (weights sum to 1).
std::vector<GroupElement> group_elements(const TwirlSpec& g);
std::size_t twirl_dim(const TwirlSpec& g);
std::string twirl_name(const TwirlSpec& g);

/// Throws SpecInvalid if a finite group has a non-unitary element or is not
/// closed under products (tolerance 1e-8).
void check_finite_group(const FiniteGroup& g);

struct OrbitAverage {
  Matrix avg_output;
  double average_residual = 0.0;
};

/// Average of g T(rho0) g† over the twirl; residual = max |avg - 1/d|.
OrbitAverage orbit_average(const QuantumChannel& t, const DensityMatrix& rho0, const TwirlSpec& g);
/// Average of g rho g† over the twirl.
Matrix twirl(const Matrix& rho, const TwirlSpec& g);

struct CovarianceCheck {
  double covariance_residual = 0.0;
  double average_residual = 0.0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kCovarianceSamples = 64;
inline constexpr double kCovarianceTol = 1e-6;

/// Max over sampled g of |T(pi(g) rho0 pi(g)†) - Pi(g) T(rho0) Pi(g)†|; finite
/// groups use every element, continuous ones 64 seeded points.
CovarianceCheck verify_weak_covariance(const QuantumChannel& t, const DensityMatrix& rho0, const TwirlSpec& pi,
                                       const TwirlSpec& Pi);

struct CapacityReport {
  double capacity = 0.0;
  double max_term = 0.0;   // S(T(rho_bar))
  double min_term = 0.0;   // minimal output entropy estimate
  double rho0_entropy = 0.0;
  double covariance_residual = 0.0;
  double average_residual = 0.0;
};

CapacityReport capacity_weakcov(const QuantumChannel& t, const DensityMatrix& rho0, const TwirlSpec& pi,
                                const TwirlSpec& Pi, const OptConfig& cfg);

/// Optimal input and representation pair used for a zoo family.
struct CovarianceSetup {
  DensityMatrix rho0;
  TwirlSpec pi;
  TwirlSpec Pi;
  std::string description;
};

CovarianceSetup auto_covariance_setup(const zoo::ChannelSpec& spec, const zoo::BuiltChannel& built,
                                      std::uint64_t seed);

struct ChiBoundReport {
  double max_chi = 0.0;
  double bound = 0.0;  // 2 C
  double max_excess = 0.0;
  std::size_t trials = 0;
};

/// Random ensembles of Haar-random pure states on the doubled space (sizes
/// uniform in 2..d^4, probabilities uniform on the simplex); compares the
/// largest chi of T (x) T with 2 C.
ChiBoundReport chi_product_bound_check(const QuantumChannel& t, double capacity, std::size_t trials,
                                       const OptConfig& cfg);

}  // namespace projchan
