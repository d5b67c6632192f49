#pragma once

#include <string>
#include <vector>

namespace keel::cli {

// Subcommands: tower, divisors, collection, gram, verify, paper-check.
// Exit codes: 0 success / verified, 1 check failure, 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace keel::cli
