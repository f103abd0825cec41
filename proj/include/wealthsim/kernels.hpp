#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops of the simulator. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. Variants are bit-equivalent by construction: every lane performs
// the same IEEE operation on the same operands as the scalar loop (no FMA
// contraction, no reassociation), so the engine produces identical states
// whichever table is active. Equivalence is enforced by tests.

namespace wealthsim::kernels {

struct Table {
    const char* name;

    // w[i] += value for all i in [0, n).
    void (*add_to_all)(double* w, std::size_t n, double value);

    // Number of elements <= threshold.
    std::size_t (*count_less_equal)(const double* w, std::size_t n,
                                    double threshold);

    // Values < / > threshold copied to out in index order; returns the count
    // m (caller provides room for n; out[m..n) is unspecified scratch).
    std::size_t (*gather_less)(const double* w, std::size_t n,
                               double threshold, double* out);
    std::size_t (*gather_greater)(const double* w, std::size_t n,
                                  double threshold, double* out);

    // Ascending indices i with w[i] < threshold (respectively <= threshold);
    // returns the count m (out[m..n) is unspecified scratch).
    std::size_t (*collect_less)(const double* w, std::size_t n,
                                double threshold, std::uint32_t* out);
    std::size_t (*collect_less_equal)(const double* w, std::size_t n,
                                      double threshold, std::uint32_t* out);

    // Ascending indices i with w[i] == value, stopping after max_count
    // matches; returns how many were written.
    std::size_t (*collect_equal)(const double* w, std::size_t n, double value,
                                 std::uint32_t* out, std::size_t max_count);

    // out[i] = (uint32) min(w[i] * inv_width, (double) overflow_bin).
    // overflow_bin is the histogram's catch-all index (== n_bins).
    void (*bin_indices)(const double* w, std::size_t n, double inv_width,
                        std::uint32_t overflow_bin, std::uint32_t* out);

    // True when no element is < 0 (NaNs are not detected; upstream
    // arithmetic cannot produce them from valid states).
    bool (*all_nonnegative)(const double* w, std::size_t n);
};

const Table& scalar_table();

// Null when the binary was built without AVX2 support or the CPU lacks it.
const Table* avx2_table();

bool avx2_supported();

// Table chosen by the WEALTHSIM_KERNEL environment variable ("scalar",
// "avx2", "auto"/unset) with CPU detection as the fallback. Cached after the
// first call. Throws ConfigError for an unknown or unavailable request.
const Table& active_table();

// Lookup by name ("scalar", "avx2", "auto"); nullptr if the name is unknown
// or names an unavailable variant.
const Table* table_by_name(std::string_view name);

}  // namespace wealthsim::kernels
