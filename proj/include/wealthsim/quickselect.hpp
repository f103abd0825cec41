#pragma once

#include <cassert>
#include <cstddef>
#include <utility>

// Quickselect on doubles with a branchless Lomuto partition. The clumped
// wealth values near the selection threshold are hostile to branch
// prediction, which makes std::nth_element several times slower here; the
// unconditional-store partition sidesteps that. Deterministic: median-of-3
// pivots, no randomization.

namespace wealthsim {

namespace detail {

// Partitions [lo, hi) so that elements < pivot come first; returns the start
// of the >= pivot region. Every iteration stores unconditionally, the only
// data-dependent operation is the index increment.
inline std::size_t partition_less(double* a, std::size_t lo, std::size_t hi,
                                  double pivot) {
    std::size_t store = lo;
    for (std::size_t k = lo; k < hi; ++k) {
        const double x = a[k];
        a[k] = a[store];
        a[store] = x;
        store += x < pivot ? 1 : 0;
    }
    return store;
}

inline std::size_t partition_less_equal(double* a, std::size_t lo,
                                        std::size_t hi, double pivot) {
    std::size_t store = lo;
    for (std::size_t k = lo; k < hi; ++k) {
        const double x = a[k];
        a[k] = a[store];
        a[store] = x;
        store += x <= pivot ? 1 : 0;
    }
    return store;
}

inline double median3(double a, double b, double c) {
    if (a > b) std::swap(a, b);
    if (b > c) b = c;
    return a > b ? a : b;
}

}  // namespace detail

// Value with the given zero-based rank in the (conceptually) sorted data.
// Reorders the buffer.
inline double kth_smallest(double* data, std::size_t n, std::size_t rank) {
    assert(rank < n);
    std::size_t lo = 0, hi = n;
    for (;;) {
        if (hi - lo <= 2) {
            if (hi - lo == 2 && data[lo] > data[lo + 1])
                std::swap(data[lo], data[lo + 1]);
            return data[rank];
        }
        const double pivot = detail::median3(data[lo], data[lo + (hi - lo) / 2],
                                             data[hi - 1]);
        const std::size_t split = detail::partition_less(data, lo, hi, pivot);
        if (rank < split) {
            hi = split;
            continue;
        }
        // rank is at or past the < region; group the == pivot run next
        const std::size_t eq_end =
            detail::partition_less_equal(data, split, hi, pivot);
        if (rank < eq_end) return pivot;
        lo = eq_end;
    }
}

}  // namespace wealthsim
