#pragma once

#include "ks/ghz_contradiction.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace ks {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitContrary = 1;
inline constexpr int kExitUsage = 2;

/// One constraint per line, "a1 b2 b3 = +1" (or -1). Blank lines and text
/// after '#' are ignored. Throws SyntaxError.
std::vector<SignConstraint> parse_constraint_lines(std::string_view text);

/// Subcommands ghz-verify, trivial-embed, sphere-verify, search. Reports go to
/// `out`, diagnostics to `err`. Returns kExitSuccess, kExitContrary or kExitUsage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ks
