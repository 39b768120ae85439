#include "projchan/additivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "projchan/error.hpp"
#include "projchan/parallel.hpp"
#include "projchan/random.hpp"
#include "projchan/zoo.hpp"

namespace projchan {

namespace {

Vector tensor_vectors(const std::vector<Vector>& parts) {
  Vector acc = Vector::Ones(1);
  for (const auto& p : parts) acc = tensor(acc, p);
  return acc;
}

/// (1/sqrt k) sum_i |i, i> on C^da (x) C^db with k = min(da, db).
Vector max_entangled_pair(std::size_t da, std::size_t db) {
  const std::size_t k = std::min(da, db);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(da * db));
  for (std::size_t i = 0; i < k; ++i) v(static_cast<Eigen::Index>(i * db + i)) = 1.0;
  return v / std::sqrt(static_cast<double>(k));
}

double trace_of_square(const Matrix& x) {
  // tr[X^2] = sum_ij X_ij X_ji, real for Hermitian X.
  return (x.array() * x.transpose().array()).sum().real();
}

}  // namespace

AdditivityReport additivity_gap(const std::vector<QuantumChannel>& channels, double alpha, const OptConfig& cfg) {
  if (channels.empty()) fail(ErrorKind::BadDims, "additivity needs at least one channel");
  check_alpha(alpha);
  const QuantumChannel joint = tensor_channels(channels);

  AdditivityReport rep;
  rep.alpha = alpha;
  std::vector<Vector> argmins;
  for (const auto& t : channels) {
    const OptReport r = min_output_entropy(t, alpha, cfg);
    rep.singles.push_back(r.value);
    argmins.push_back(r.arg_vector);
  }

  std::vector<Vector> warm{tensor_vectors(argmins)};
  if (channels.size() >= 2) {
    std::vector<Vector> parts{max_entangled_pair(channels[0].dim(), channels[1].dim())};
    for (std::size_t k = 2; k < channels.size(); ++k) parts.push_back(argmins[k]);
    warm.push_back(tensor_vectors(parts));
  }
  const OptReport j = min_output_entropy(joint, alpha, cfg, warm);
  rep.joint = j.value;
  rep.witness_state = j.arg_state;
  rep.witness_start = j.best_start;
  rep.joint_starts = j.starts;
  double total = 0.0;
  for (double s : rep.singles) total += s;
  rep.gap = channels.size() == 1 ? 0.0 : total - rep.joint;
  return rep;
}

Matrix apply_product_map(const std::vector<LinearMap>& maps, const Matrix& x) {
  Dims dims;
  for (const auto& m : maps) dims.push_back(m.dim());
  const std::size_t total = dims_product(dims);
  if (x.rows() != static_cast<Eigen::Index>(total) || x.cols() != static_cast<Eigen::Index>(total)) {
    fail(ErrorKind::DimMismatch, "state dimension differs from the product of map dimensions");
  }
  Matrix y = x;
  for (std::size_t k = 0; k < maps.size(); ++k) y = maps[k].apply_on(y, dims, k);
  return y;
}

TraceSquareResult trace_square_bound(const std::vector<ScaledMap>& maps, const DensityMatrix& rho) {
  if (maps.empty()) fail(ErrorKind::BadDims, "no maps given");
  std::vector<LinearMap> plain;
  TraceSquareResult r;
  r.bound = 1.0;
  for (const auto& s : maps) {
    if (s.m == 0) fail(ErrorKind::BadDims, "m must be positive");
    plain.push_back(s.map);
    r.bound /= static_cast<double>(s.m);
  }
  r.lhs = trace_of_square(apply_product_map(plain, rho.matrix()));
  r.holds = r.lhs <= r.bound + kTraceSquareTol;
  return r;
}

PurityExpansion purity_expansion(const std::vector<QuantumChannel>& channels,
                                 const std::vector<ProjectiveForm>& forms, const DensityMatrix& rho) {
  if (channels.empty() || channels.size() != forms.size()) {
    fail(ErrorKind::NotProjectiveClass, "every channel needs a projective form");
  }
  const std::size_t n = channels.size();
  if (n > 16) fail(ErrorKind::DimensionOverflow, "too many factors for the subset sum");
  Dims dims;
  std::vector<LinearMap> maps;
  for (std::size_t i = 0; i < n; ++i) {
    if (forms[i].d != channels[i].dim()) fail(ErrorKind::DimMismatch, "form and channel dimensions differ");
    dims.push_back(channels[i].dim());
    maps.push_back(forms[i].map);
  }
  const Matrix omega = apply_product_map(maps, rho.matrix());

  double prefactor = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = static_cast<double>(forms[i].d) - static_cast<double>(forms[i].m);
    prefactor /= gap * gap;
  }
  double sum = 0.0;
  // Subsets Gamma as bitmasks in increasing numeric order; the empty subset contributes tr[omega_0^2] = 1.
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> keep;
    double weight = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = static_cast<double>(forms[i].m);
      if (mask & (std::size_t{1} << i)) {
        keep.push_back(i);
        weight *= m * m;
      } else {
        weight *= static_cast<double>(forms[i].d) - 2.0 * m;
      }
    }
    const double tr_sq = keep.empty() ? 1.0 : trace_of_square(partial_trace(omega, dims, keep));
    sum += weight * tr_sq;
  }

  PurityExpansion out;
  out.expansion = prefactor * sum;
  out.direct = trace_of_square(tensor_channels(channels).apply(rho.matrix()));
  return out;
}

std::vector<Lemma3Pair> lemma3_suite(const std::vector<NamedMap>& maps, std::size_t trials, std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < maps.size(); ++a) {
    for (std::size_t b = a; b < maps.size(); ++b) pairs.emplace_back(a, b);
  }
  std::vector<Lemma3Pair> out(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& first = maps[pairs[p].first];
    const auto& second = maps[pairs[p].second];
    const std::vector<ScaledMap> both{first.map, second.map};
    const std::size_t dim = first.map.map.dim() * second.map.map.dim();
    std::vector<double> excess(trials);
    parallel_for(trials, [&](std::size_t k) {
      Rng rng(derive_seed(seed, p * trials + k));
      const DensityMatrix rho = (k % 2 == 0) ? DensityMatrix::pure(random_unit_vector(dim, rng))
                                             : DensityMatrix::from_matrix(random_density_matrix(dim, rng));
      const auto r = trace_square_bound(both, rho);
      excess[k] = r.lhs - r.bound;
    });
    Lemma3Pair& res = out[p];
    res.first = first.name;
    res.second = second.name;
    res.trials = trials;
    res.max_excess = -std::numeric_limits<double>::infinity();
    for (double e : excess) {
      res.max_excess = std::max(res.max_excess, e);
      if (e > kTraceSquareTol) ++res.violations;
    }
  }
  return out;
}

std::vector<NamedMap> standard_lemma3_maps() {
  auto form_of = [](const zoo::ChannelSpec& spec) {
    const auto built = zoo::build(spec);
    return ScaledMap{built.form->map, built.form->m};
  };
  return {
      {"transpose3", ScaledMap{LinearMap::transpose(3), 1}},
      {"weyl3", form_of(zoo::WeylShift{3})},
      {"pinch3", form_of(zoo::Pinching{3, zoo::block_projections({2, 1})})},
      {"coarse2x2", form_of(zoo::CoarseGraining{2, 2})},
  };
}

}  // namespace projchan
