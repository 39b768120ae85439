#include "projchan/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "projchan/additivity.hpp"
#include "projchan/capacity.hpp"
#include "projchan/channel.hpp"
#include "projchan/entropy.hpp"
#include "projchan/eof.hpp"
#include "projchan/error.hpp"
#include "projchan/io.hpp"
#include "projchan/zoo.hpp"

#ifndef PROJCHAN_VERSION
#define PROJCHAN_VERSION "0.0.0"
#endif

namespace projchan::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 12648430;
  std::size_t starts = 64;
  double tol = 1e-9;
  std::string format = "json";
  std::string out;
  bool timing = false;

  std::vector<std::string> specs;
  std::string file;
  std::string alpha = "1";
  std::vector<std::string> alpha_grid{"0", "0.5", "1", "2", "5", "inf"};
  std::size_t max_iters = 2000;
  std::size_t lemma3 = 0;
  std::string group = "auto";
  std::string output_rep = "same";
  std::size_t chi_trials = 0;
  std::string state;
  std::size_t ensemble_size = 0;
  bool list = false;
};

double parse_alpha(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return kAlphaInf;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid alpha '" + text + "' (expected a number or inf)");
  }
  return v;
}

OptConfig opt_config(const Options& o) {
  OptConfig c;
  c.starts = o.starts;
  c.seed = o.seed;
  c.tol = o.tol;
  c.max_iters = o.max_iters;
  return c;
}

struct Source {
  std::string label;
  QuantumChannel channel;
  std::optional<zoo::ChannelSpec> spec;
  std::optional<zoo::BuiltChannel> built;
};

Source from_spec(const std::string& text) {
  Source s;
  s.label = text;
  s.spec = io::parse_spec(text);
  s.built = zoo::build(*s.spec);
  s.channel = s.built->channel;
  return s;
}

/// Exactly one of --spec / --file.
Source single_source(const Options& o, bool require_cptp = true) {
  if (o.specs.size() + (o.file.empty() ? 0 : 1) != 1) throw UsageError("give exactly one of --spec or --file");
  if (!o.specs.empty()) return from_spec(o.specs.front());
  Source s;
  s.label = o.file;
  s.channel = io::load_channel(o.file, require_cptp);
  return s;
}

Json to_json_list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(io::number(x));
  return a;
}

Json spectrum_json(const RealVector& values) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), std::greater<>());
  return to_json_list(v);
}

Json opt_json(const OptReport& r) {
  return Json{{"value", io::number(r.value)},
              {"best_start", r.best_start},
              {"starts", r.starts},
              {"seed", r.seed},
              {"converged", r.converged},
              {"per_start_values", to_json_list(r.per_start_values)}};
}

// ------------------------------------------------------------- subcommands

Json cmd_validate(const Options& o, int& exit_code) {
  const Source s = single_source(o, false);
  const ValidationReport v = validate(s.channel);
  if (!v.valid()) exit_code = kExitValidation;
  return Json{{"channel", s.label},
              {"dim", s.channel.dim()},
              {"kraus_count", s.channel.kraus().size()},
              {"flags",
               {{"trace_preserving", v.trace_preserving},
                {"completely_positive", v.completely_positive},
                {"valid", v.valid()}}},
              {"residuals", {{"tp_residual", v.tp_residual}, {"min_choi_eigenvalue", v.min_choi_eigenvalue}}}};
}

Json cmd_zoo(const Options& o) {
  if (o.list) {
    Json lines = Json::array();
    std::stringstream ss(io::spec_grammar());
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line.substr(line.find_first_not_of(' ')));
    return Json{{"families", lines}};
  }
  if (o.specs.size() != 1) throw UsageError("zoo needs exactly one --spec (or --list)");
  const Source s = from_spec(o.specs.front());
  const ValidationReport v = validate(s.channel);
  const PptResult ppt = is_ppt_choi(s.channel);
  Json r{{"family", zoo::family_name(*s.spec)},
         {"dim", s.channel.dim()},
         {"kraus_count", s.channel.kraus().size()},
         {"choi_spectrum", spectrum_json(eigvals_hermitian(s.channel.choi()))},
         {"flags",
          {{"valid", v.valid()}, {"ppt_choi", ppt.ppt}, {"projective_form", s.built->form.has_value()}}},
         {"residuals",
          {{"tp_residual", v.tp_residual},
           {"min_choi_eigenvalue", v.min_choi_eigenvalue},
           {"min_ppt_eigenvalue", ppt.min_eigenvalue}}}};
  if (s.built->form) {
    r["m"] = s.built->form->m;
    r["residuals"]["reconstruction"] = s.built->form->reconstruction_residual;
  }
  return r;
}

Json cmd_minent(const Options& o) {
  const Source s = single_source(o);
  const double alpha = parse_alpha(o.alpha);
  const OptReport r = min_output_entropy(s.channel, alpha, opt_config(o));
  Json j = opt_json(r);
  j["channel"] = s.label;
  j["alpha"] = io::number(alpha);
  j["output_spectrum"] = spectrum_json(s.channel.apply(r.arg_state).spectrum());
  return j;
}

Json cmd_norm(const Options& o) {
  const Source s = single_source(o);
  const OptReport r = max_output_norm(s.channel, opt_config(o));
  Json j = opt_json(r);
  j["channel"] = s.label;
  j["output_spectrum"] = spectrum_json(s.channel.apply(r.arg_state).spectrum());
  return j;
}

Json cmd_characterize(const Options& o) {
  const Source s = single_source(o);
  std::vector<double> grid;
  for (const auto& a : o.alpha_grid) grid.push_back(parse_alpha(a));
  const CharacterizationReport r = characterize(s.channel, grid, opt_config(o));
  Json j{{"channel", s.label},
         {"alpha_grid", to_json_list(r.alpha_grid)},
         {"nu_values", to_json_list(r.nu_values)},
         {"nu_spread", r.nu_spread},
         {"max_norm", r.max_norm},
         {"projection_rank", r.projection_rank},
         {"flags",
          {{"constant_nu", r.constant_nu},
           {"norm_at_projection", r.norm_at_projection},
           {"projective_form", r.projective_form.has_value()},
           {"agreement", r.agreement}}}};
  if (r.projective_form) {
    j["m"] = r.projective_form->m;
    j["residuals"] = {{"reconstruction", r.projective_form->reconstruction_residual}};
  } else {
    j["extraction_error"] = r.extraction_error;
  }
  return j;
}

Json cmd_additivity(const Options& o) {
  if (!o.file.empty()) throw UsageError("additivity takes --spec only");
  if (o.specs.empty() && o.lemma3 == 0) throw UsageError("additivity needs --spec (repeatable) or --check-lemma3");
  Json j = Json::object();
  if (!o.specs.empty()) {
    std::vector<QuantumChannel> channels;
    for (const auto& sp : o.specs) channels.push_back(from_spec(sp).channel);
    const double alpha = parse_alpha(o.alpha);
    const AdditivityReport r = additivity_gap(channels, alpha, opt_config(o));
    const char* start_kind = r.witness_start == 0 ? "product" : (r.witness_start == 1 && channels.size() >= 2)
                                                                     ? "max_entangled"
                                                                     : "random";
    j["additivity"] = Json{{"alpha", io::number(alpha)},
                           {"singles", to_json_list(r.singles)},
                           {"joint", io::number(r.joint)},
                           {"gap", io::number(r.gap)},
                           {"witness_start", r.witness_start},
                           {"witness_kind", start_kind},
                           {"joint_starts", r.joint_starts},
                           {"witness_spectrum", spectrum_json(r.witness_state.spectrum())}};
  }
  if (o.lemma3 > 0) {
    const auto pairs = lemma3_suite(standard_lemma3_maps(), o.lemma3, o.seed);
    Json list = Json::array();
    bool all_hold = true;
    for (const auto& p : pairs) {
      all_hold = all_hold && p.violations == 0;
      list.push_back(Json{{"first", p.first},
                          {"second", p.second},
                          {"trials", p.trials},
                          {"violations", p.violations},
                          {"max_excess", p.max_excess}});
    }
    j["lemma3"] = Json{{"pairs", list}, {"flags", {{"all_hold", all_hold}}}};
  }
  return j;
}

CovarianceSetup group_setup(const Options& o, const Source& s) {
  if (o.group == "auto") {
    if (!s.spec) throw UsageError("--group auto needs --spec");
    return auto_covariance_setup(*s.spec, *s.built, o.seed);
  }
  const std::size_t d = s.channel.dim();
  FiniteGroup g;
  if (o.group == "shifts") {
    for (std::size_t i = 0; i < d; ++i) g.unitaries.push_back(zoo::weyl_shift(d, i));
  } else if (o.group == "phases") {
    for (std::size_t j = 0; j < d; ++j) g.unitaries.push_back(zoo::weyl_phase(d, j));
  } else if (o.group == "heisenberg") {
    g.unitaries = zoo::heisenberg_group(d);
  } else {
    throw UsageError("unknown --group '" + o.group + "' (auto|shifts|phases|heisenberg)");
  }
  FiniteGroup out = g;
  if (o.output_rep == "conj") {
    for (auto& u : out.unitaries) u = u.conjugate().eval();
  } else if (o.output_rep != "same") {
    throw UsageError("--output-rep must be same or conj");
  }
  const DensityMatrix rho0 = (s.spec && s.built) ? auto_covariance_setup(*s.spec, *s.built, o.seed).rho0
                                                 : DensityMatrix::basis_state(d, 0);
  return {rho0, g, out, o.group + "; Pi = " + (o.output_rep == "conj" ? "conj(pi)" : "pi")};
}

Json cmd_capacity(const Options& o) {
  const Source s = single_source(o);
  const CovarianceSetup g = group_setup(o, s);
  const CapacityReport r = capacity_weakcov(s.channel, g.rho0, g.pi, g.Pi, opt_config(o));
  Json j{{"channel", s.label},
         {"group", g.description},
         {"capacity", r.capacity},
         {"max_term", r.max_term},
         {"min_term", r.min_term},
         {"rho0_entropy", r.rho0_entropy},
         {"residuals", {{"covariance", r.covariance_residual}, {"average", r.average_residual}}},
         {"flags", {{"weakly_covariant", true}}}};
  if (o.chi_trials > 0) {
    const ChiBoundReport c = chi_product_bound_check(s.channel, r.capacity, o.chi_trials, opt_config(o));
    j["chi_product_check"] = Json{{"max_chi", c.max_chi},
                                  {"bound", c.bound},
                                  {"max_excess", c.max_excess},
                                  {"trials", c.trials},
                                  {"flags", {{"holds", c.max_excess <= 1e-6}}}};
  }
  return j;
}

Json cmd_covariance(const Options& o) {
  const Source s = single_source(o);
  const CovarianceSetup g = group_setup(o, s);
  const CovarianceCheck c = verify_weak_covariance(s.channel, g.rho0, g.pi, g.Pi);
  const bool ok = c.covariance_residual <= kCovarianceTol && c.average_residual <= kCovarianceTol;
  return Json{{"channel", s.label},
              {"group", g.description},
              {"samples", c.samples},
              {"residuals", {{"covariance", c.covariance_residual}, {"average", c.average_residual}}},
              {"flags", {{"weakly_covariant", ok}}}};
}

Json cmd_eof(const Options& o) {
  if (o.state.empty()) throw UsageError("eof needs --state example9 or --state FILE.json");
  const BipartiteState rho = o.state == "example9" ? example9_state() : io::load_state(o.state);
  EofConfig c;
  c.starts = o.starts;
  c.seed = o.seed;
  c.max_iters = o.max_iters;
  c.ensemble_size = o.ensemble_size;
  const EofReport r = eof_upper(rho, c);
  return Json{{"state", o.state},
              {"subsystems", {{"dimA", rho.dimA}, {"dimB", rho.dimB}}},
              {"value", r.value},
              {"rank", r.rank},
              {"ensemble_size", r.ensemble_size},
              {"best_start", r.best_start},
              {"seed", r.seed},
              {"converged", r.converged},
              {"ensemble_probs", to_json_list(r.ensemble.probs)},
              {"per_start_values", to_json_list(r.per_start_values)}};
}

Json cmd_dilate(const Options& o) {
  const Source s = single_source(o);
  const Isometry u = stinespring(s.channel);
  const Matrix gram = u.mat.adjoint() * u.mat;
  return Json{{"channel", s.label},
              {"isometry", io::isometry_to_json(u)},
              {"subsystems", "output|environment"},
              {"residuals", {{"isometry", max_abs(gram - identity(u.dim_in))}}}};
}

void emit(const Options& o, const Json& report, std::ostream& out) {
  const std::string text = o.format == "csv" ? io::flatten_csv(report) : io::dump_json(report);
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Projective-output quantum channel toolkit", "projchan"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", PROJCHAN_VERSION);
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--starts", o.starts, "multistart count")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "optimizer tolerance")->capture_default_str();
  app.add_option("--format", o.format, "report format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "write the report to this file");
  app.add_flag("--timing", o.timing, "record wall time in the manifest");
  app.add_option("--max-iters", o.max_iters, "iteration cap per start")->capture_default_str();

  auto channel_opts = [&](CLI::App* sub, bool multi_spec) {
    if (multi_spec) {
      sub->add_option("--spec", o.specs, "zoo spec string (repeatable)");
    } else {
      sub->add_option("--spec", o.specs, "zoo spec string")->expected(1);
    }
    sub->add_option("--file", o.file, "channel JSON file");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check trace preservation and complete positivity");
  channel_opts(validate_cmd, false);
  auto* zoo_cmd = app.add_subcommand("zoo", "build a zoo channel and report its structure");
  zoo_cmd->add_option("--spec", o.specs, "zoo spec string")->expected(1);
  zoo_cmd->add_flag("--list", o.list, "list the spec grammar");
  auto* minent_cmd = app.add_subcommand("minent", "minimal output Renyi entropy");
  channel_opts(minent_cmd, false);
  minent_cmd->add_option("--alpha", o.alpha, "Renyi order (number or inf)")->capture_default_str();
  auto* norm_cmd = app.add_subcommand("norm", "maximal output operator norm");
  channel_opts(norm_cmd, false);
  auto* char_cmd = app.add_subcommand("characterize", "projective-output characterization");
  channel_opts(char_cmd, false);
  char_cmd->add_option("--alpha-grid", o.alpha_grid, "Renyi orders")->capture_default_str();
  auto* add_cmd = app.add_subcommand("additivity", "additivity gap of a tensor product");
  channel_opts(add_cmd, true);
  add_cmd->add_option("--alpha", o.alpha, "Renyi order (number or inf)")->capture_default_str();
  add_cmd->add_option("--check-lemma3", o.lemma3, "random trials per map pair for the trace-square bound");
  auto* cap_cmd = app.add_subcommand("capacity", "Holevo capacity of a weakly covariant channel");
  channel_opts(cap_cmd, false);
  cap_cmd->add_option("--group", o.group, "auto|shifts|phases|heisenberg")->capture_default_str();
  cap_cmd->add_option("--output-rep", o.output_rep, "same|conj (explicit groups)")->capture_default_str();
  cap_cmd->add_option("--chi-trials", o.chi_trials, "random ensembles for the two-copy chi bound");
  auto* cov_cmd = app.add_subcommand("covariance", "weak covariance residuals");
  channel_opts(cov_cmd, false);
  cov_cmd->add_option("--group", o.group, "auto|shifts|phases|heisenberg")->capture_default_str();
  cov_cmd->add_option("--output-rep", o.output_rep, "same|conj (explicit groups)")->capture_default_str();
  auto* eof_cmd = app.add_subcommand("eof", "upper bound on the entanglement of formation");
  eof_cmd->add_option("--state", o.state, "example9 or a state JSON file");
  eof_cmd->add_option("--ensemble-size", o.ensemble_size, "ensemble size (0 = rank^2)");
  auto* dilate_cmd = app.add_subcommand("dilate", "Stinespring isometry");
  channel_opts(dilate_cmd, false);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  const auto t0 = std::chrono::steady_clock::now();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(PROJCHAN_VERSION) + "\n" : app.help());
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n\n" << app.help() << "\nChannel specs:\n" << io::spec_grammar();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    int exit_code = kExitOk;
    Json result;
    std::optional<double> alpha;
    if (command == "validate") {
      result = cmd_validate(o, exit_code);
    } else if (command == "zoo") {
      result = cmd_zoo(o);
    } else if (command == "minent") {
      result = cmd_minent(o);
      alpha = parse_alpha(o.alpha);
    } else if (command == "norm") {
      result = cmd_norm(o);
    } else if (command == "characterize") {
      result = cmd_characterize(o);
    } else if (command == "additivity") {
      result = cmd_additivity(o);
      if (!o.specs.empty()) alpha = parse_alpha(o.alpha);
    } else if (command == "capacity") {
      result = cmd_capacity(o);
    } else if (command == "covariance") {
      result = cmd_covariance(o);
    } else if (command == "eof") {
      result = cmd_eof(o);
    } else {
      result = cmd_dilate(o);
    }

    Json config{{"seed", o.seed}, {"starts", o.starts}, {"tol", o.tol}, {"max_iters", o.max_iters}};
    if (alpha) config["alpha"] = io::number(*alpha);
    Json manifest{{"command", command}, {"specs", o.specs}, {"config", config}, {"version", PROJCHAN_VERSION}};
    if (!o.file.empty()) manifest["file"] = o.file;
    if (!o.state.empty()) manifest["state"] = o.state;
    if (o.timing) {
      manifest["wall_time_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    emit(o, Json{{"manifest", manifest}, {"result", result}}, out);
    return exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << sub->help() << "\nChannel specs:\n" << io::spec_grammar();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::NoConvergence ? kExitInternal : kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace projchan::cli
