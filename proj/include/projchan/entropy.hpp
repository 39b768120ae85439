#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "projchan/channel.hpp"
#include "projchan/state.hpp"

namespace projchan {

/// Renyi order alpha in [0, inf]; infinity is std::numeric_limits<double>::infinity().
inline constexpr double kAlphaInf = std::numeric_limits<double>::infinity();
inline constexpr double kVonNeumannBand = 1e-6;
inline constexpr double kRankCutoff = 1e-10;

void check_alpha(double alpha);
/// Entropy in bits of a spectrum (entries clamped at zero).
double renyi_from_spectrum(const RealVector& eigenvalues, double alpha);
double renyi_entropy(const DensityMatrix& rho, double alpha);
double von_neumann(const RealVector& eigenvalues);

struct OptConfig {
  std::size_t starts = 64;
  std::uint64_t seed = 12648430;
  std::size_t max_iters = 2000;
  double tol = 1e-9;
  double tol_equiv = 1e-5;
};

struct OptReport {
  double value = 0.0;
  DensityMatrix arg_state;
  Vector arg_vector;
  std::size_t starts = 0;
  std::uint64_t seed = 0;
  std::size_t best_start = 0;
  std::vector<double> per_start_values;
  bool converged = false;
};

/// Upper bound on the minimal output alpha-entropy over pure inputs. Warm
/// starts occupy the first start indices; the remaining starts draw seeded
/// random unit vectors.
OptReport min_output_entropy(const QuantumChannel& t, double alpha, const OptConfig& cfg,
                             const std::vector<Vector>& warm_starts = {});

/// Estimated max over pure inputs of the largest output eigenvalue.
OptReport max_output_norm(const QuantumChannel& t, const OptConfig& cfg, const std::vector<Vector>& warm_starts = {});

/// Alternating support reduction: repeatedly replace psi by the input that
/// minimizes the output weight outside the current top-`rank` eigenspace.
/// Returns the best iterate (smallest outside weight).
Vector refine_output_support(const QuantumChannel& t, const Vector& psi, std::size_t rank,
                             std::size_t max_rounds = 200);

struct CharacterizationReport {
  std::vector<double> alpha_grid;
  std::vector<double> nu_values;
  bool constant_nu = false;
  double nu_spread = 0.0;
  double max_norm = 0.0;
  Vector witness;
  bool norm_at_projection = false;
  std::size_t projection_rank = 0;
  std::optional<ProjectiveForm> projective_form;
  std::string extraction_error;
  /// All three predicates agree (all true or all false).
  bool agreement = false;
};

CharacterizationReport characterize(const QuantumChannel& t, const std::vector<double>& alpha_grid,
                                    const OptConfig& cfg);

}  // namespace projchan
