#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "projchan/capacity.hpp"
#include "projchan/channel.hpp"
#include "projchan/entropy.hpp"

namespace projchan {

struct BipartiteState {
  std::size_t dimA = 0;
  std::size_t dimB = 0;
  DensityMatrix mat;
};

BipartiteState make_bipartite(std::size_t dimA, std::size_t dimB, const Matrix& rho);

/// Von Neumann entropy (bits) of tr_B |psi><psi| for a unit vector on A (x) B.
double entanglement_entropy(const Vector& psi, std::size_t dimA, std::size_t dimB);

/// The four listed vectors on C^4 (x) C^4 and their uniform mixture.
std::vector<Vector> example9_vectors();
BipartiteState example9_state();

/// rho = sum p_i U|phi_i><phi_i|U† on (channel output) (x) (environment).
BipartiteState channel_optimal_state(const QuantumChannel& t, const Ensemble& e);

struct EofConfig {
  std::size_t starts = 64;
  std::uint64_t seed = 12648430;
  std::size_t max_iters = 2000;
  std::size_t ensemble_size = 0;  // 0 selects rank^2
};

struct EofReport {
  double value = 0.0;
  Ensemble ensemble;
  std::vector<double> per_start_values;
  std::size_t best_start = 0;
  std::size_t ensemble_size = 0;
  std::size_t rank = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Upper bound on the entanglement of formation. Ensembles are
/// psi_i = sum_j U_ij sqrt(lambda_j) e_j for k x r isometries U; start 0 is the
/// eigen-ensemble, further starts are seeded Haar isometries, each refined by
/// Riemannian descent on the Stiefel manifold.
EofReport eof_upper(const BipartiteState& rho, const EofConfig& cfg);

}  // namespace projchan
