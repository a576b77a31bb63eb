#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "popcheck/interval.hpp"
#include "popcheck/means.hpp"

namespace popcheck {

/// All randomness in popcheck comes from this sampler: std::mt19937_64 seeded
/// with one 64-bit value, mapped to [0, 1) by taking the top 53 bits. Both
/// steps are fixed by the C++ standard, so a seed reproduces the same points
/// on every platform (std::uniform_real_distribution is not used because its
/// output is implementation defined).
class SeededSampler {
public:
    explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Triple triple(const std::array<Interval, 3>& box) {
        const double x = uniform(box[0].lo, box[0].hi);
        const double y = uniform(box[1].lo, box[1].hi);
        const double z = uniform(box[2].lo, box[2].hi);
        return {x, y, z};
    }

    Triple triple(double lo, double hi) {
        const double x = uniform(lo, hi);
        const double y = uniform(lo, hi);
        const double z = uniform(lo, hi);
        return {x, y, z};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace popcheck
