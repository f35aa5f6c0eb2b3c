#pragma once

#include <cstdint>

#include "wph/io.hpp"

namespace wph {

/// Runs a reduced version of every invariant suite with the given seed.
/// Output: {"seed", "checks": [{"name", "pass", "metric", "threshold"}], "passed"}.
/// Metrics are rounded to 9 significant digits so the document is
/// byte-stable for a fixed seed.
[[nodiscard]] io::Json run_selftest(std::uint64_t seed);

}  // namespace wph
