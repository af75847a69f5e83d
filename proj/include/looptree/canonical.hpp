#pragma once

#include <string>

#include "looptree/looptree.hpp"

namespace looptree {

/// Canonical string of a rooted connected cactus multigraph: two graphs get
/// the same string iff they are isomorphic by a map fixing the root. Every
/// looptree and every ball of one is a cactus. Throws std::invalid_argument
/// when an edge lies on two cycles or the graph is disconnected.
std::string canonical_form(const Looptree& graph);

}  // namespace looptree
