// ============================================================================
//  cli.hpp -- the command-line driver entry point
// ============================================================================
//
//  Verbs: translate, check-model, find-model, subsumes, analyze,
//  check-state, roundtrip, depth.  Reports are JSON by default; --pretty
//  switches to a human-readable rendering.  Exit codes: 0 success or
//  positive verdict, 1 negative verdict (no model, refuted, illegal,
//  mismatch), 2 usage error, 3 unreadable or malformed input.
//
// ============================================================================

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aluni::cli {

/// Runs one invocation; `args` excludes the program name.  All normal
/// output goes to `out`, diagnostics to `err`.  Identical invocations
/// produce byte-identical output.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace aluni::cli
