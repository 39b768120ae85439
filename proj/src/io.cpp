#include "projchan/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "projchan/error.hpp"

namespace projchan::io {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t v) { return static_cast<Idx>(v); }

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  fail(ErrorKind::ParseError, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& field) {
  if (!j.is_object()) parse_fail(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(field.empty() ? key : field + "." + key, "missing");
  return *it;
}

std::size_t require_size(const Json& j, const std::string& key, const std::string& field) {
  const Json& v = require(j, key, field);
  const std::string name = field.empty() ? key : field + "." + key;
  if (!v.is_number_integer() || v.get<long long>() <= 0) parse_fail(name, "expected a positive integer");
  return v.get<std::size_t>();
}

std::vector<std::vector<double>> real_rows(const Json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r];
    const std::string rname = field + "[" + std::to_string(r) + "]";
    if (!row.is_array()) parse_fail(rname, "expected an array of numbers");
    std::vector<double> vals;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number()) parse_fail(rname + "[" + std::to_string(c) + "]", "expected a number");
      vals.push_back(row[c].get<double>());
    }
    if (!rows.empty() && vals.size() != rows.front().size()) parse_fail(rname, "ragged row");
    rows.push_back(std::move(vals));
  }
  return rows;
}

std::vector<double> real_list(const Json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) parse_fail(field + "[" + std::to_string(k) + "]", "expected a number");
    out.push_back(j[k].get<double>());
  }
  return out;
}

std::string format_double(double v) {
  if (v == 0.0) return "0.0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      // nlohmann's default object type is an ordered std::map, so iteration is sorted.
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[" << nl;
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << "," << nl;
        os << pad;
        write_json(os, j[k], indent, depth + 1);
      }
      os << nl << close_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    }
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k) + "]", os);
  } else {
    std::string value;
    if (j.is_number_float()) {
      value = format_double(j.get<double>());
    } else if (j.is_string()) {
      value = j.get<std::string>();
    } else {
      value = j.dump();
    }
    os << csv_field(prefix) << "," << csv_field(value) << "\n";
  }
}

// ------------------------------------------------------------ spec strings

struct SpecArgs {
  std::string family;
  std::map<std::string, std::string> values;
};

[[noreturn]] void spec_fail(const std::string& text, const std::string& what) {
  fail(ErrorKind::SpecInvalid, "spec '" + text + "': " + what);
}

SpecArgs split_spec(const std::string& text) {
  SpecArgs a;
  const auto colon = text.find(':');
  a.family = text.substr(0, colon);
  if (a.family.empty()) spec_fail(text, "missing family name");
  if (colon == std::string::npos) return a;
  std::string last_key;
  std::stringstream ss(text.substr(colon + 1));
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      // A bare value continues a comma-separated list (K=1,2).
      if (last_key.empty() || token.empty()) spec_fail(text, "expected key=value, got '" + token + "'");
      a.values[last_key] += "," + token;
      continue;
    }
    last_key = token.substr(0, eq);
    if (last_key.empty()) spec_fail(text, "empty key");
    if (a.values.count(last_key)) spec_fail(text, "duplicate key '" + last_key + "'");
    a.values[last_key] = token.substr(eq + 1);
  }
  return a;
}

std::size_t parse_size(const std::string& text, const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty()) {
    spec_fail(text, "'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& text, const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty()) {
    spec_fail(text, "'" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

std::vector<std::size_t> parse_list(const std::string& text, const std::string& key, const std::string& v, char sep) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_size(text, key, item));
  if (out.empty()) spec_fail(text, "'" + key + "' is empty");
  return out;
}

void expect_keys(const std::string& text, const SpecArgs& a, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  for (const char* k : required) {
    if (!a.values.count(k)) spec_fail(text, std::string("missing key '") + k + "'");
  }
  for (const auto& [k, v] : a.values) {
    bool known = false;
    for (const char* r : required) known = known || k == r;
    for (const char* o : optional) known = known || k == o;
    if (!known) spec_fail(text, "unknown key '" + k + "' for family '" + a.family + "'");
  }
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Idx r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Idx c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  const auto re = real_rows(require(j, "re", field), field + ".re");
  const auto im = real_rows(require(j, "im", field), field + ".im");
  if (re.size() != im.size() || (!re.empty() && re.front().size() != im.front().size())) {
    parse_fail(field, "re and im shapes differ");
  }
  const std::size_t rows = re.size();
  const std::size_t cols = rows ? re.front().size() : 0;
  Matrix m(ix(rows), ix(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(ix(r), ix(c)) = cplx(re[r][c], im[r][c]);
  }
  return m;
}

Json channel_to_json(const QuantumChannel& t) {
  Json kraus = Json::array();
  for (const auto& a : t.kraus()) kraus.push_back(matrix_to_json(a));
  return Json{{"dim", t.dim()}, {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const Json& j, bool require_cptp) {
  const std::size_t d = require_size(j, "dim", "");
  const Json& list = require(j, "kraus", "");
  if (!list.is_array() || list.empty()) parse_fail("kraus", "expected a nonempty array");
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string name = "kraus[" + std::to_string(k) + "]";
    Matrix a = matrix_from_json(list[k], name);
    if (a.rows() != ix(d) || a.cols() != ix(d)) {
      fail(ErrorKind::ValidationError, name + " is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                           ", expected " + std::to_string(d) + "x" + std::to_string(d));
    }
    kraus.push_back(std::move(a));
  }
  QuantumChannel t = QuantumChannel::from_kraus(std::move(kraus));
  const ValidationReport v = validate(t);
  if (require_cptp && !v.valid()) {
    std::ostringstream os;
    os.precision(17);
    os << "channel is not CPTP: tp_residual=" << v.tp_residual << " min_choi_eigenvalue=" << v.min_choi_eigenvalue;
    fail(ErrorKind::ValidationError, os.str());
  }
  return t;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::ParseError,
         path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" + e.what() + ")");
  }
}

QuantumChannel load_channel(const std::string& path, bool require_cptp) {
  return channel_from_json(read_json_file(path), require_cptp);
}

Json state_to_json(const BipartiteState& rho) {
  Json j = matrix_to_json(rho.mat.matrix());
  j["dimA"] = rho.dimA;
  j["dimB"] = rho.dimB;
  return j;
}

BipartiteState state_from_json(const Json& j) {
  const Matrix m = matrix_from_json(j, "state");
  if (m.rows() != m.cols() || m.rows() == 0) parse_fail("state", "expected a nonempty square matrix");
  const auto n = static_cast<std::size_t>(m.rows());
  std::size_t a = 0;
  std::size_t b = 0;
  if (j.contains("dimA") || j.contains("dimB")) {
    a = require_size(j, "dimA", "");
    b = require_size(j, "dimB", "");
  } else {
    a = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    b = a;
    if (a * b != n) parse_fail("state", "dimension is not a square; give dimA and dimB");
  }
  if (a * b != n) fail(ErrorKind::ValidationError, "dimA * dimB differs from the matrix dimension");
  try {
    return make_bipartite(a, b, m);
  } catch (const Error& e) {
    fail(ErrorKind::ValidationError, e.what());
  }
}

BipartiteState load_state(const std::string& path) { return state_from_json(read_json_file(path)); }

Json isometry_to_json(const Isometry& u) {
  Json j = matrix_to_json(u.mat);
  j["dim_in"] = u.dim_in;
  j["dim_out"] = u.dim_out;
  j["env_dim"] = u.env_dim;
  return j;
}

zoo::Diagonal load_diagonal(const std::string& path) {
  const Json j = read_json_file(path);
  const Json& list = require(j, "diagonals", "");
  if (!list.is_array() || list.empty()) parse_fail("diagonals", "expected a nonempty array");
  zoo::Diagonal out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string name = "diagonals[" + std::to_string(k) + "]";
    const auto re = real_list(require(list[k], "re", name), name + ".re");
    const auto im = real_list(require(list[k], "im", name), name + ".im");
    if (re.size() != im.size()) parse_fail(name, "re and im lengths differ");
    std::vector<cplx> diag;
    for (std::size_t i = 0; i < re.size(); ++i) diag.emplace_back(re[i], im[i]);
    out.diagonals.push_back(std::move(diag));
  }
  out.d = out.diagonals.front().size();
  return out;
}

zoo::ChannelSpec parse_spec(const std::string& text) {
  const SpecArgs a = split_spec(text);
  auto size_of = [&](const char* key) { return parse_size(text, key, a.values.at(key)); };
  if (a.family == "wh") {
    expect_keys(text, a, {"d"});
    return zoo::WernerHolevo{size_of("d")};
  }
  if (a.family == "stretch") {
    expect_keys(text, a, {"d", "lambda"});
    return zoo::Stretching{size_of("d"), parse_real(text, "lambda", a.values.at("lambda")), std::nullopt};
  }
  if (a.family == "weyl") {
    expect_keys(text, a, {"d"});
    return zoo::WeylShift{size_of("d")};
  }
  if (a.family == "pinch") {
    expect_keys(text, a, {"d", "blocks"});
    const std::size_t d = size_of("d");
    const auto blocks = parse_list(text, "blocks", a.values.at("blocks"), '+');
    std::size_t total = 0;
    for (std::size_t b : blocks) {
      if (b == 0) spec_fail(text, "blocks must be positive");
      total += b;
    }
    if (total != d) spec_fail(text, "blocks sum to " + std::to_string(total) + ", expected d=" + std::to_string(d));
    return zoo::Pinching{d, zoo::block_projections(blocks)};
  }
  if (a.family == "casimir") {
    expect_keys(text, a, {"d"});
    return zoo::CasimirIrreducible{size_of("d")};
  }
  if (a.family == "casimir-reducible") {
    expect_keys(text, a, {});
    return zoo::CasimirReducibleExample{};
  }
  if (a.family == "shiftpinch") {
    expect_keys(text, a, {"d", "K"});
    return zoo::ShiftsPinching{size_of("d"), parse_list(text, "K", a.values.at("K"), ',')};
  }
  if (a.family == "coarse") {
    expect_keys(text, a, {"n", "D"});
    return zoo::CoarseGraining{size_of("n"), size_of("D")};
  }
  if (a.family == "diag") {
    expect_keys(text, a, {"file"});
    return load_diagonal(a.values.at("file"));
  }
  if (a.family == "dephase") {
    expect_keys(text, a, {"d"});
    const std::size_t d = size_of("d");
    zoo::Diagonal diag{d, {}};
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<cplx> v(d, 0.0);
      v[k] = 1.0;
      diag.diagonals.push_back(std::move(v));
    }
    return diag;
  }
  if (a.family == "id") {
    expect_keys(text, a, {"d"});
    return zoo::Identity{size_of("d")};
  }
  if (a.family == "depol") {
    expect_keys(text, a, {"d"});
    return zoo::CompletelyDepolarizing{size_of("d")};
  }
  spec_fail(text, "unknown family '" + a.family + "'");
}

std::string spec_grammar() {
  return "  wh:d=N                 Werner-Holevo\n"
         "  stretch:d=N,lambda=X   stretching, omega = |0><0|\n"
         "  weyl:d=N               Weyl shifts\n"
         "  pinch:d=N,blocks=A+B   pinching into contiguous blocks\n"
         "  casimir:d=N            irreducible spin-(N-1)/2 Casimir channel\n"
         "  casimir-reducible      fixed d=4 reducible Casimir example\n"
         "  shiftpinch:d=N,K=I,J   shifts-and-pinching, K a subset of 1..N\n"
         "  coarse:n=N,D=M         coarse graining on C^N (x) C^M\n"
         "  diag:file=PATH         diagonal Kraus operators from JSON\n"
         "  dephase:d=N            complete dephasing\n"
         "  id:d=N                 identity channel\n"
         "  depol:d=N              completely depolarizing channel\n";
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  os << "\n";
  return os.str();
}

std::string flatten_csv(const Json& j) {
  std::ostringstream os;
  os << "metric,value\n";
  flatten(j, "", os);
  return os.str();
}

}  // namespace projchan::io
