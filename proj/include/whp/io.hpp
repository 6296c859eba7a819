#pragma once

#include <string>
#include <string_view>

#include "whp/canonical.hpp"
#include "whp/gog.hpp"
#include "whp/surface.hpp"
#include "whp/whitehead.hpp"

namespace whp::io {

/// The text parsed but describes an invalid object (bad graph, non-invertible
/// map). Parse errors proper are ParseError and name the line.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Reads a whole file; throws IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Tuple files: one coordinate per line, `exact <word>` or `cyclic <word>`,
// optionally followed by `group <id>`. Lines starting with `#` are comments.
// `source` only labels error messages.
TupleInstance parse_free_tuple(std::string_view text, const Alphabet& alphabet, const std::string& source = "<input>");
/// Graph-of-groups tuples; grouped conjugacy is rejected.
canon::GTuple parse_gog_tuple(std::string_view text, const gog::Splitting& s, const std::string& source = "<input>");
std::string format_free_tuple(const TupleInstance& t);
std::string format_gog_tuple(const gog::Splitting& s, const canon::GTuple& t);

// Group files:
//   vertex <label> free gens=a,b
//   vertex <label> abelian rank=2 [names=u,v]
//   vertex <label> surface genus=1 boundary=1 [names=p,q]
//   edge <label> <v1> <v2> img1=<word|(k1,...)> img2=<...> tree=<none|T|T1> [order=<k>] [letter=<t>]
//   twist <surface-label> <gen> -> <word> ; <gen> -> <word> ...
gog::GraphOfGroups parse_group(std::string_view text, const std::string& source = "<input>");
/// parse_group followed by validation; invariant failures throw ValidationError.
gog::Splitting load_group(std::string_view text, const std::string& source = "<input>");
std::string format_group(const gog::GraphOfGroups& g);

// Automorphism files: `name -> word` per generator, optionally followed by
// `inverse name -> word` lines. Free maps without inverse lines are inverted
// by search; graph-of-groups maps require them.
Automorphism parse_free_auto(std::string_view text, const Alphabet& alphabet, const std::string& source = "<input>");
gog::GAutomorphism parse_gog_auto(std::string_view text, const gog::Splitting& s,
                                  const std::string& source = "<input>");
std::string format_free_auto(const Automorphism& phi);
std::string format_gog_auto(const gog::Splitting& s, const gog::GAutomorphism& phi);

/// Query file: `surface genus=<g> boundary=<b> [names=...]`, then lines
/// `u <word>`, `v <word>`, `c <word>`, `d <word>`.
QHExponentQuery parse_qh_query(std::string_view text, const std::string& source = "<input>");

}  // namespace whp::io
