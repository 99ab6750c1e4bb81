#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracls {

struct PropertyResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Fast invariant suite at reduced sample counts: gamma recurrence, power
/// rule vs quadrature, integer-order limit, filter reductions, modulus
/// realness, critical-point residuals, the minimum bound sweep, noise
/// calibration and worker-count determinism.
std::vector<PropertyResult> run_validation_suite(std::uint64_t seed = 1);

} // namespace fracls
