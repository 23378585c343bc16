#pragma once

#include <cstdint>
#include <vector>

#include "circlerev/circle.hpp"

namespace circlerev {

// Verification sample plan: low-discrepancy rationals from the Farey
// enumeration plus seeded random rationals, excluding given points.
struct SamplePlan {
    std::size_t deterministic = 256;
    std::size_t random = 256;
    std::uint64_t seed = 1;
};

std::vector<CirclePoint> sample_points(const SamplePlan& plan,
                                       const std::vector<CirclePoint>& exclude = {});

}  // namespace circlerev
