#pragma once

// JSON and CSV plumbing: channel/state/isometry files, zoo spec strings and
// byte-stable report serialization.

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "projchan/capacity.hpp"
#include "projchan/channel.hpp"
#include "projchan/eof.hpp"
#include "projchan/zoo.hpp"

namespace projchan::io {

using Json = nlohmann::json;

/// {"re": [[...]], "im": [[...]]}.
Json matrix_to_json(const Matrix& m);
/// Throws ParseError naming `field` when the object is malformed.
Matrix matrix_from_json(const Json& j, const std::string& field);

/// {"dim": d, "kraus": [{"re", "im"}, ...]}.
Json channel_to_json(const QuantumChannel& t);
/// ParseError on schema problems, ValidationError on shape, trace-preservation
/// or complete-positivity failure (with residuals in the message). With
/// `require_cptp` false only the schema and shapes are checked.
QuantumChannel channel_from_json(const Json& j, bool require_cptp = true);
QuantumChannel load_channel(const std::string& path, bool require_cptp = true);

/// {"dimA": a, "dimB": b, "re", "im"}; dimA/dimB default to a square split.
Json state_to_json(const BipartiteState& rho);
BipartiteState state_from_json(const Json& j);
BipartiteState load_state(const std::string& path);

/// {"dim_in", "dim_out", "env_dim", "re", "im"}.
Json isometry_to_json(const Isometry& u);

/// {"diagonals": [{"re": [...], "im": [...]}, ...]}; d is the vector length.
zoo::Diagonal load_diagonal(const std::string& path);

/// Reads a whole file; ParseError when unreadable, with line and column for
/// JSON syntax errors.
Json read_json_file(const std::string& path);

/// Parses `family:key=value,...` strings such as `wh:d=3`, `pinch:d=3,blocks=2+1`
/// or `diag:file=PATH`. Grammar violations throw SpecInvalid.
zoo::ChannelSpec parse_spec(const std::string& text);
/// The accepted grammar, one line per family.
std::string spec_grammar();

/// Deterministic JSON text: keys sorted, numbers with 17 significant digits,
/// non-finite numbers as the strings "inf", "-inf", "nan".
std::string dump_json(const Json& j, int indent = 2);

/// One (metric, value) row per scalar; nested keys joined with '.', array
/// indices as [i].
std::string flatten_csv(const Json& j);

/// Number or the strings "inf"/"-inf"/"nan".
Json number(double v);

}  // namespace projchan::io
