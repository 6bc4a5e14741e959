#pragma once

#include <iosfwd>

namespace obsgap::cli {

/// Entry point of the obsgap tool. Returns 0 on success, 1 on a numerical
/// failure and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace obsgap::cli
