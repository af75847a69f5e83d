#pragma once

#include <iosfwd>

namespace looptree {

/// Small-case oracles and property checks, one PASS/FAIL line each.
/// Returns the number of failures.
int run_verify(bool quick, std::ostream& out);

}  // namespace looptree
