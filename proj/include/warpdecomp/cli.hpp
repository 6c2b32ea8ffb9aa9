#pragma once

// Command-line driver: build, eval, invert, validate, circle and enumerate.
//
// Exit codes: 0 success, 2 domain or validation error, 3 parse error
// (malformed JSON, schema violations, bad flags).

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "warpdecomp/warp.hpp"

namespace wpd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitParse = 3;

/// Malformed JSON or a document that does not match the seed schema. The
/// message starts with the offending field path.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedDocument {
  InitialData data;
  /// flags.canonical: the built decomposition must be in canonical form.
  bool require_canonical = false;
};

/// Throws ParseError; dimension and geometry problems are left to build().
SeedDocument parse_seed(std::string_view text);

/// Full build of a parsed seed, enforcing flags.canonical.
WarpedDecomposition build_seed(const SeedDocument& doc);

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wpd::cli
