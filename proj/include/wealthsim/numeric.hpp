#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace wealthsim {

// Neumaier-compensated sum. Used wherever a total is compared against the
// invariant wealth W, so the check itself does not contribute O(n*eps) noise.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

}  // namespace wealthsim
