#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace looptree {

/// Runs one subcommand. Exit status: 0 ok, 1 resource or convergence
/// failure, 2 usage error. Output that has no --out file goes to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace looptree
