#include "wealthsim/kernels.hpp"

// AVX2 variants, compiled with -mavx2 in this translation unit only and
// reached exclusively through the dispatch table. Lane arithmetic mirrors
// the scalar kernels exactly: plain add/mul/min/compare, no FMA, so results
// are bit-identical to the reference implementations.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>

namespace wealthsim::kernels {
namespace {

// Compression patterns for packing masked lanes to the front, in lane order.
// kPairPerm is an epi32 permutation selecting the two dwords of each chosen
// double; kLaneShuffle is a byte shuffle selecting chosen u32 lanes.
alignas(32) constexpr std::uint32_t kPairPerm[16][8] = {
    {0, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0},
    {2, 3, 0, 0, 0, 0, 0, 0}, {0, 1, 2, 3, 0, 0, 0, 0},
    {4, 5, 0, 0, 0, 0, 0, 0}, {0, 1, 4, 5, 0, 0, 0, 0},
    {2, 3, 4, 5, 0, 0, 0, 0}, {0, 1, 2, 3, 4, 5, 0, 0},
    {6, 7, 0, 0, 0, 0, 0, 0}, {0, 1, 6, 7, 0, 0, 0, 0},
    {2, 3, 6, 7, 0, 0, 0, 0}, {0, 1, 2, 3, 6, 7, 0, 0},
    {4, 5, 6, 7, 0, 0, 0, 0}, {0, 1, 4, 5, 6, 7, 0, 0},
    {2, 3, 4, 5, 6, 7, 0, 0}, {0, 1, 2, 3, 4, 5, 6, 7},
};

#define WS_LANE(a) 4 * (a), 4 * (a) + 1, 4 * (a) + 2, 4 * (a) + 3
#define WS_PAD 0x80, 0x80, 0x80, 0x80
alignas(16) constexpr std::uint8_t kLaneShuffle[16][16] = {
    {WS_PAD, WS_PAD, WS_PAD, WS_PAD},
    {WS_LANE(0), WS_PAD, WS_PAD, WS_PAD},
    {WS_LANE(1), WS_PAD, WS_PAD, WS_PAD},
    {WS_LANE(0), WS_LANE(1), WS_PAD, WS_PAD},
    {WS_LANE(2), WS_PAD, WS_PAD, WS_PAD},
    {WS_LANE(0), WS_LANE(2), WS_PAD, WS_PAD},
    {WS_LANE(1), WS_LANE(2), WS_PAD, WS_PAD},
    {WS_LANE(0), WS_LANE(1), WS_LANE(2), WS_PAD},
    {WS_LANE(3), WS_PAD, WS_PAD, WS_PAD},
    {WS_LANE(0), WS_LANE(3), WS_PAD, WS_PAD},
    {WS_LANE(1), WS_LANE(3), WS_PAD, WS_PAD},
    {WS_LANE(0), WS_LANE(1), WS_LANE(3), WS_PAD},
    {WS_LANE(2), WS_LANE(3), WS_PAD, WS_PAD},
    {WS_LANE(0), WS_LANE(2), WS_LANE(3), WS_PAD},
    {WS_LANE(1), WS_LANE(2), WS_LANE(3), WS_PAD},
    {WS_LANE(0), WS_LANE(1), WS_LANE(2), WS_LANE(3)},
};
#undef WS_LANE
#undef WS_PAD

void add_to_all_avx2(double* w, std::size_t n, double value) {
    const __m256d v = _mm256_set1_pd(value);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d a = _mm256_loadu_pd(w + i);
        __m256d b = _mm256_loadu_pd(w + i + 4);
        _mm256_storeu_pd(w + i, _mm256_add_pd(a, v));
        _mm256_storeu_pd(w + i + 4, _mm256_add_pd(b, v));
    }
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(w + i);
        _mm256_storeu_pd(w + i, _mm256_add_pd(a, v));
    }
    for (; i < n; ++i) w[i] += value;
}

std::size_t count_less_avx2(const double* w, std::size_t n, double threshold) {
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t m = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        m += static_cast<unsigned>(__builtin_popcount(
            _mm256_movemask_pd(_mm256_cmp_pd(a, t, _CMP_LT_OQ))));
    }
    for (; i < n; ++i) {
        if (w[i] < threshold) ++m;
    }
    return m;
}

std::size_t count_less_equal_avx2(const double* w, std::size_t n,
                                  double threshold) {
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t m = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        m += static_cast<unsigned>(__builtin_popcount(
            _mm256_movemask_pd(_mm256_cmp_pd(a, t, _CMP_LE_OQ))));
    }
    for (; i < n; ++i) {
        if (w[i] <= threshold) ++m;
    }
    return m;
}

// Compressing gathers/collects: store a full packed vector each block and
// advance by popcount. Writes stay in bounds because at most i lanes have
// matched once block i begins.
template <int Cmp>
std::size_t gather_by_cmp(const double* w, std::size_t n, double threshold,
                          double* out) {
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t m = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(a, t, Cmp));
        const __m256i perm = _mm256_load_si256(
            reinterpret_cast<const __m256i*>(kPairPerm[mask]));
        const __m256i packed =
            _mm256_permutevar8x32_epi32(_mm256_castpd_si256(a), perm);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + m), packed);
        m += static_cast<unsigned>(__builtin_popcount(mask));
    }
    for (; i < n; ++i) {
        const bool take = Cmp == _CMP_LT_OQ ? (w[i] < threshold)
                                            : (w[i] > threshold);
        if (take) out[m++] = w[i];
    }
    return m;
}

std::size_t gather_less_avx2(const double* w, std::size_t n, double threshold,
                             double* out) {
    return gather_by_cmp<_CMP_LT_OQ>(w, n, threshold, out);
}

std::size_t gather_greater_avx2(const double* w, std::size_t n,
                                double threshold, double* out) {
    return gather_by_cmp<_CMP_GT_OQ>(w, n, threshold, out);
}

template <int Cmp>
std::size_t collect_by_cmp(const double* w, std::size_t n, double threshold,
                           std::uint32_t* out) {
    const __m256d t = _mm256_set1_pd(threshold);
    const __m128i lane_id = _mm_setr_epi32(0, 1, 2, 3);
    std::size_t m = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(a, t, Cmp));
        const __m128i idx =
            _mm_add_epi32(_mm_set1_epi32(static_cast<int>(i)), lane_id);
        const __m128i shuffle = _mm_load_si128(
            reinterpret_cast<const __m128i*>(kLaneShuffle[mask]));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + m),
                         _mm_shuffle_epi8(idx, shuffle));
        m += static_cast<unsigned>(__builtin_popcount(mask));
    }
    for (; i < n; ++i) {
        const bool take = Cmp == _CMP_LT_OQ ? (w[i] < threshold)
                                            : (w[i] <= threshold);
        if (take) out[m++] = static_cast<std::uint32_t>(i);
    }
    return m;
}

std::size_t collect_less_avx2(const double* w, std::size_t n, double threshold,
                              std::uint32_t* out) {
    return collect_by_cmp<_CMP_LT_OQ>(w, n, threshold, out);
}

std::size_t collect_less_equal_avx2(const double* w, std::size_t n,
                                    double threshold, std::uint32_t* out) {
    return collect_by_cmp<_CMP_LE_OQ>(w, n, threshold, out);
}

std::size_t collect_equal_avx2(const double* w, std::size_t n, double value,
                               std::uint32_t* out, std::size_t max_count) {
    const __m256d t = _mm256_set1_pd(value);
    std::size_t m = 0;
    std::size_t i = 0;
    for (; i + 4 <= n && m < max_count; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(a, t, _CMP_EQ_OQ));
        while (mask != 0 && m < max_count) {
            const int bit = __builtin_ctz(mask);
            out[m++] = static_cast<std::uint32_t>(i + bit);
            mask &= mask - 1;
        }
    }
    for (; i < n && m < max_count; ++i) {
        if (w[i] == value) out[m++] = static_cast<std::uint32_t>(i);
    }
    return m;
}

void bin_indices_avx2(const double* w, std::size_t n, double inv_width,
                      std::uint32_t overflow_bin, std::uint32_t* out) {
    const double cap = static_cast<double>(overflow_bin);
    const __m256d scale = _mm256_set1_pd(inv_width);
    const __m256d capv = _mm256_set1_pd(cap);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        const __m256d scaled = _mm256_min_pd(_mm256_mul_pd(a, scale), capv);
        const __m128i idx = _mm256_cvttpd_epi32(scaled);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), idx);
    }
    for (; i < n; ++i) {
        const double scaled = std::min(w[i] * inv_width, cap);
        out[i] = static_cast<std::uint32_t>(scaled);
    }
}

bool all_nonnegative_avx2(const double* w, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(w + i);
        if (_mm256_movemask_pd(_mm256_cmp_pd(a, zero, _CMP_LT_OQ)) != 0)
            return false;
    }
    for (; i < n; ++i) {
        if (w[i] < 0.0) return false;
    }
    return true;
}

const Table kAvx2Table = {
    "avx2",
    add_to_all_avx2,
    count_less_avx2,
    count_less_equal_avx2,
    gather_less_avx2,
    gather_greater_avx2,
    collect_less_avx2,
    collect_less_equal_avx2,
    collect_equal_avx2,
    bin_indices_avx2,
    all_nonnegative_avx2,
};

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

const Table* avx2_table() {
    return avx2_supported() ? &kAvx2Table : nullptr;
}

}  // namespace wealthsim::kernels

#else  // non-x86 build: no AVX2 variant, dispatch falls back to scalar.

namespace wealthsim::kernels {

bool avx2_supported() { return false; }
const Table* avx2_table() { return nullptr; }

}  // namespace wealthsim::kernels

#endif
