#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "projchan/additivity.hpp"
#include "projchan/capacity.hpp"
#include "projchan/channel.hpp"
#include "projchan/entropy.hpp"
#include "projchan/eof.hpp"
#include "projchan/error.hpp"
#include "projchan/io.hpp"
#include "projchan/zoo.hpp"

namespace py = pybind11;
using namespace projchan;

namespace {

OptConfig make_config(std::size_t starts, std::uint64_t seed) {
  OptConfig c;
  c.starts = starts;
  c.seed = seed;
  return c;
}

py::dict opt_report(const OptReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["arg_vector"] = r.arg_vector;
  d["per_start_values"] = r.per_start_values;
  d["best_start"] = r.best_start;
  d["converged"] = r.converged;
  return d;
}

zoo::BuiltChannel build(const std::string& spec) { return zoo::build(io::parse_spec(spec)); }

}  // namespace

PYBIND11_MODULE(_projchan, m) {
  m.doc() = "Projective-output quantum channels: entropies, additivity, capacities and entanglement of formation";

  py::register_exception<Error>(m, "ProjchanError", PyExc_ValueError);

  m.attr("ALPHA_INF") = kAlphaInf;

  py::class_<QuantumChannel>(m, "Channel")
      .def_static("from_kraus", &QuantumChannel::from_kraus, py::arg("kraus"))
      .def_property_readonly("dim", &QuantumChannel::dim)
      .def_property_readonly("kraus", &QuantumChannel::kraus)
      .def_property_readonly("choi", &QuantumChannel::choi)
      .def("apply", py::overload_cast<const Matrix&>(&QuantumChannel::apply, py::const_), py::arg("rho"))
      .def("validate", [](const QuantumChannel& t) {
        const ValidationReport v = validate(t);
        return py::dict(py::arg("valid") = v.valid(), py::arg("trace_preserving") = v.trace_preserving,
                        py::arg("completely_positive") = v.completely_positive, py::arg("tp_residual") = v.tp_residual,
                        py::arg("min_choi_eigenvalue") = v.min_choi_eigenvalue);
      });

  m.def("zoo", [](const std::string& spec) { return build(spec).channel; }, py::arg("spec"),
        "Builds a channel from a spec string such as 'wh:d=3'.");
  m.def(
      "projective_m",
      [](const std::string& spec) -> std::optional<std::size_t> {
        const auto b = build(spec);
        return b.form ? std::optional<std::size_t>(b.form->m) : std::nullopt;
      },
      py::arg("spec"));
  m.def("spec_grammar", &io::spec_grammar);

  m.def(
      "renyi_entropy",
      [](const Matrix& rho, double alpha) { return renyi_entropy(DensityMatrix::from_matrix(rho), alpha); },
      py::arg("rho"), py::arg("alpha"));
  m.def(
      "min_output_entropy",
      [](const QuantumChannel& t, double alpha, std::size_t starts, std::uint64_t seed) {
        return opt_report(min_output_entropy(t, alpha, make_config(starts, seed)));
      },
      py::arg("channel"), py::arg("alpha"), py::arg("starts") = 64, py::arg("seed") = OptConfig{}.seed);
  m.def(
      "max_output_norm",
      [](const QuantumChannel& t, std::size_t starts, std::uint64_t seed) {
        return opt_report(max_output_norm(t, make_config(starts, seed)));
      },
      py::arg("channel"), py::arg("starts") = 64, py::arg("seed") = OptConfig{}.seed);

  m.def(
      "additivity_gap",
      [](const std::vector<QuantumChannel>& channels, double alpha, std::size_t starts, std::uint64_t seed) {
        const AdditivityReport r = additivity_gap(channels, alpha, make_config(starts, seed));
        return py::dict(py::arg("singles") = r.singles, py::arg("joint") = r.joint, py::arg("gap") = r.gap,
                        py::arg("witness_start") = r.witness_start);
      },
      py::arg("channels"), py::arg("alpha"), py::arg("starts") = 64, py::arg("seed") = OptConfig{}.seed);

  m.def(
      "holevo_chi",
      [](const QuantumChannel& t, const std::vector<double>& probs, const std::vector<Matrix>& states) {
        Ensemble e{probs, {}};
        for (const auto& s : states) e.states.push_back(DensityMatrix::from_matrix(s));
        return holevo_chi(t, e);
      },
      py::arg("channel"), py::arg("probs"), py::arg("states"));
  m.def(
      "capacity",
      [](const std::string& spec, std::size_t starts, std::uint64_t seed) {
        const auto parsed = io::parse_spec(spec);
        const auto built = zoo::build(parsed);
        const auto setup = auto_covariance_setup(parsed, built, seed);
        const CapacityReport r = capacity_weakcov(built.channel, setup.rho0, setup.pi, setup.Pi, make_config(starts, seed));
        return py::dict(py::arg("capacity") = r.capacity, py::arg("max_term") = r.max_term,
                        py::arg("min_term") = r.min_term, py::arg("covariance_residual") = r.covariance_residual,
                        py::arg("average_residual") = r.average_residual);
      },
      py::arg("spec"), py::arg("starts") = 64, py::arg("seed") = OptConfig{}.seed,
      "Capacity from the weak-covariance formula with the family's default group.");

  m.def("example9_state", [] { return example9_state().mat.matrix(); });
  m.def(
      "eof_upper",
      [](const Matrix& rho, std::size_t dimA, std::size_t dimB, std::size_t starts, std::uint64_t seed) {
        EofConfig cfg;
        cfg.starts = starts;
        cfg.seed = seed;
        const EofReport r = eof_upper(make_bipartite(dimA, dimB, rho), cfg);
        return py::dict(py::arg("value") = r.value, py::arg("probs") = r.ensemble.probs,
                        py::arg("converged") = r.converged);
      },
      py::arg("rho"), py::arg("dimA"), py::arg("dimB"), py::arg("starts") = 64, py::arg("seed") = EofConfig{}.seed);
}
