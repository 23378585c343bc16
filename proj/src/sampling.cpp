#include "circlerev/sampling.hpp"

#include <numeric>
#include <random>
#include <set>

namespace circlerev {

std::vector<CirclePoint> sample_points(const SamplePlan& plan,
                                       const std::vector<CirclePoint>& exclude) {
    std::set<Rat> taken;
    for (const auto& p : exclude) taken.insert(p.value());
    std::vector<CirclePoint> out;
    out.reserve(plan.deterministic + plan.random);

    for (long q = 2; out.size() < plan.deterministic; ++q) {
        for (long p = 1; p < q && out.size() < plan.deterministic; ++p) {
            if (std::gcd(p, q) != 1) continue;
            Rat r(p, q);
            r.canonicalize();
            if (taken.insert(r).second) out.emplace_back(r);
        }
    }

    std::mt19937_64 rng(plan.seed);
    while (out.size() < plan.deterministic + plan.random) {
        long den = 1024 + (long)(rng() % 15373);
        long num = (long)(rng() % (std::uint64_t)den);
        Rat r(num, den);
        r.canonicalize();
        if (taken.insert(r).second) out.emplace_back(r);
    }
    return out;
}

}  // namespace circlerev
