#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "looptree/loopspine.hpp"

namespace looptree {

/// One probability per line; blank lines and text after '#' are ignored.
std::vector<double> parse_law_table(std::istream& in);
std::vector<double> read_law_table(const std::string& path);

/// Header `# looptree ball R=<radius> seed=<seed>`, then `u v multiplicity`
/// edge lines, then `# vertices` and `id distance open|closed|outgrowth` rows.
void write_ball(std::ostream& out, const LoopspineBall& ball, std::uint64_t seed);

std::string kind_name(VertexKind kind);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace looptree
