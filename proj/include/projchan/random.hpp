#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "projchan/linalg.hpp"

namespace projchan {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Per-start seed: depends only on (master, index), so start k draws the
/// same numbers no matter how many starts run or in which order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

Vector random_unit_vector(std::size_t d, Rng& rng);
/// Haar unitary from the QR decomposition of a complex Ginibre matrix, with
/// the phases of R's diagonal moved into Q.
Matrix haar_unitary(std::size_t n, Rng& rng);
/// First `cols` columns of a Haar unitary.
Matrix haar_isometry(std::size_t rows, std::size_t cols, Rng& rng);
/// Full-rank Ginibre state G G† / tr(G G†).
Matrix random_density_matrix(std::size_t d, Rng& rng);
/// Uniform point on the probability simplex.
std::vector<double> random_simplex(std::size_t n, Rng& rng);

}  // namespace projchan
