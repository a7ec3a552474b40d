#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace advreg {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  ///< observed vs expected, for the report line
};

/// Runs the oracle suite that certifies the closed forms before experiments:
/// Monte-Carlo loss agreement, inner-max tightness, finite-difference
/// subgradient checks, convexity probes, grid-search equivalence and the
/// Gaussian absolute-moment identity. Deterministic per seed; the Monte-Carlo
/// agreement check is allowed one reseed before it counts as failed.
std::vector<CheckResult> run_validation(std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace advreg
