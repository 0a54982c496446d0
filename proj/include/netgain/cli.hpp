#pragma once

// Command-line front end. `run` is the whole program minus process exit,
// so it can be driven from tests with captured streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace netgain::cli {

/// Report payload version.
inline constexpr int kSchemaVersion = 1;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netgain::cli
