#include "wealthsim/kernels.hpp"

#include <algorithm>

// Reference kernels. The SIMD variants must match these bit-for-bit, so the
// formulas here define the semantics: one IEEE add/mul/compare per element,
// no reassociation.

namespace wealthsim::kernels {
namespace {

void add_to_all_scalar(double* w, std::size_t n, double value) {
    for (std::size_t i = 0; i < n; ++i) w[i] += value;
}

std::size_t count_less_equal_scalar(const double* w, std::size_t n,
                                    double threshold) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] <= threshold) ++m;
    }
    return m;
}

std::size_t gather_less_scalar(const double* w, std::size_t n,
                               double threshold, double* out) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] < threshold) out[m++] = w[i];
    }
    return m;
}

std::size_t gather_greater_scalar(const double* w, std::size_t n,
                                  double threshold, double* out) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] > threshold) out[m++] = w[i];
    }
    return m;
}

std::size_t collect_less_scalar(const double* w, std::size_t n,
                                double threshold, std::uint32_t* out) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] < threshold) out[m++] = static_cast<std::uint32_t>(i);
    }
    return m;
}

std::size_t collect_less_equal_scalar(const double* w, std::size_t n,
                                      double threshold, std::uint32_t* out) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] <= threshold) out[m++] = static_cast<std::uint32_t>(i);
    }
    return m;
}

std::size_t collect_equal_scalar(const double* w, std::size_t n, double value,
                                 std::uint32_t* out, std::size_t max_count) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n && m < max_count; ++i) {
        if (w[i] == value) out[m++] = static_cast<std::uint32_t>(i);
    }
    return m;
}

void bin_indices_scalar(const double* w, std::size_t n, double inv_width,
                        std::uint32_t overflow_bin, std::uint32_t* out) {
    const double cap = static_cast<double>(overflow_bin);
    for (std::size_t i = 0; i < n; ++i) {
        const double scaled = std::min(w[i] * inv_width, cap);
        out[i] = static_cast<std::uint32_t>(scaled);
    }
}

bool all_nonnegative_scalar(const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] < 0.0) return false;
    }
    return true;
}

const Table kScalarTable = {
    "scalar",
    add_to_all_scalar,
    count_less_equal_scalar,
    gather_less_scalar,
    gather_greater_scalar,
    collect_less_scalar,
    collect_less_equal_scalar,
    collect_equal_scalar,
    bin_indices_scalar,
    all_nonnegative_scalar,
};

}  // namespace

const Table& scalar_table() { return kScalarTable; }

}  // namespace wealthsim::kernels
