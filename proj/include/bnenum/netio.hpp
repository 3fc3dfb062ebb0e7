#pragma once

// Text formats.
//
// Network document (JSON):
//   {
//     "name": "net-a",
//     "nodes": [
//       {"id": "A", "states": ["yes", "no"], "parents": [], "cpt": [0.2, 0.8]},
//       ...
//     ]
//   }
// `cpt` is the row-major table described on bnenum::Cpt. serialize_network
// writes one node per line with the shortest of 15, 16 or 17 significant
// digits that reads back exactly, so a canonical document survives
// parse + serialize byte for byte.
//
// Evidence document: a JSON object mapping variable id to state name, e.g.
// {"B": "wet"}. Empty text is an empty map.
//
// Result records: one per line, either a JSON object
//   {"rank":1,"logp":-0.579...,"p":0.56...,"assignment":{"A":"no","B":"dry"}}
// (logp is the string "-inf" for zero-probability records) or tab-separated
//   rank  logp  p  A=no  B=dry
// with assignments in network declaration order.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>

#include "bnenum/engine.hpp"
#include "bnenum/model.hpp"

namespace bnenum {

/// Parses and validates. Throws ParseError (syntax, shape, with location) or
/// ValidationError (invariants of the network).
BayesianNetwork parse_network(std::string_view text);
/// Parses without running validate_network.
BayesianNetwork parse_network_unchecked(std::string_view text);

std::string serialize_network(const BayesianNetwork& net);

Evidence parse_evidence(std::string_view text, const BayesianNetwork& net);

enum class RecordFormat { records, tsv };

struct WriteOptions {
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  RecordFormat format = RecordFormat::records;
  /// Stop at the first zero-probability instantiation.
  bool skip_zero = false;
};

struct WriteResult {
  std::size_t written = 0;
  /// The stream had no further instantiation when writing stopped.
  bool stream_ended = false;
  /// Writing stopped at a zero-probability item because of skip_zero.
  bool stopped_at_zero = false;
};

/// Pulls up to `options.limit` instantiations from `stream` and writes one
/// record each. Throws IoError when the sink fails.
WriteResult write_instantiations(InstantiationStream& stream, const BayesianNetwork& net, std::ostream& sink,
                                 const WriteOptions& options = {});

/// Shortest %g form (15 to 17 digits) that parses back to x; "-inf", "inf"
/// and "nan" verbatim.
std::string format_double(double x);

}  // namespace bnenum
