#pragma once

#include <ostream>

namespace qmem {

/// Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qmem
