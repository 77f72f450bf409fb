#pragma once

#include <ostream>

namespace tle {

/// Run the embedded check suite (hand-computed fixtures plus small
/// brute-force equivalences), printing one line per named check. Returns
/// the number of failing checks; 0 means a healthy build.
int run_selftest(std::ostream& out);

} // namespace tle
