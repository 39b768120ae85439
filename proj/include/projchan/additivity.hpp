#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "projchan/channel.hpp"
#include "projchan/entropy.hpp"

namespace projchan {

struct AdditivityReport {
  double alpha = 0.0;
  std::vector<double> singles;
  double joint = 0.0;
  double gap = 0.0;  // sum(singles) - joint
  DensityMatrix witness_state;
  /// 0 = product of single-channel minimizers, 1 = maximally entangled start,
  /// larger = random start.
  std::size_t witness_start = 0;
  std::size_t joint_starts = 0;
};

/// Joint optimization uses the product of single argmins as start 0 and (for
/// two or more factors) the maximally entangled state of the first two
/// factors, tensored with the remaining argmins, as start 1.
AdditivityReport additivity_gap(const std::vector<QuantumChannel>& channels, double alpha, const OptConfig& cfg);

/// A linear map together with its integer m (tr[M(rho)^2] <= 1/m expected).
struct ScaledMap {
  LinearMap map;
  std::size_t m = 1;
};

struct TraceSquareResult {
  double lhs = 0.0;
  double bound = 0.0;
  bool holds = false;
};

inline constexpr double kTraceSquareTol = 1e-9;

/// lhs = tr[((x) M_i)(rho)^2], bound = prod 1/m_i.
TraceSquareResult trace_square_bound(const std::vector<ScaledMap>& maps, const DensityMatrix& rho);

/// Applies M_0 (x) M_1 (x) ... to an operator on the product space.
Matrix apply_product_map(const std::vector<LinearMap>& maps, const Matrix& x);

struct PurityExpansion {
  double expansion = 0.0;
  double direct = 0.0;
};

/// Evaluates tr[((x) T_i)(rho)^2] from the reduced states of omega = ((x) M_i)(rho)
/// as a sum over subsets, next to the direct value.
PurityExpansion purity_expansion(const std::vector<QuantumChannel>& channels,
                                 const std::vector<ProjectiveForm>& forms, const DensityMatrix& rho);

struct Lemma3Pair {
  std::string first;
  std::string second;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max(lhs - bound)
};

struct NamedMap {
  std::string name;
  ScaledMap map;
};

/// Seeded random states on every unordered pair (with repetition) of maps;
/// trial k uses a pure state for even k and a Ginibre mixed state for odd k.
std::vector<Lemma3Pair> lemma3_suite(const std::vector<NamedMap>& maps, std::size_t trials, std::uint64_t seed);

/// transpose_3, WeylShift{3}, Pinching{3; 2+1} and CoarseGraining{2,2} maps.
std::vector<NamedMap> standard_lemma3_maps();

}  // namespace projchan
