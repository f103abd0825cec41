#include <doctest.h>

#include <cstring>
#include <vector>

#include <algorithm>

#include "wealthsim/kernels.hpp"
#include "wealthsim/quickselect.hpp"
#include "wealthsim/rng.hpp"

using namespace wealthsim;

namespace {

std::vector<double> random_values(RandomStream& rng, std::size_t n,
                                  double scale) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform01() * scale;
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() ||
            std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("scalar kernels: semantics") {
    const auto& kt = kernels::scalar_table();

    SUBCASE("add_to_all") {
        std::vector<double> w{1.0, 2.0, 3.0};
        kt.add_to_all(w.data(), w.size(), 0.5);
        CHECK(w == std::vector<double>{1.5, 2.5, 3.5});
    }

    SUBCASE("counts and gathers") {
        const std::vector<double> w{0.5, 0.1, 0.9, 0.1};
        CHECK(kt.count_less(w.data(), w.size(), 0.5) == 2);
        CHECK(kt.count_less_equal(w.data(), w.size(), 0.5) == 3);

        std::vector<double> vals(w.size());
        CHECK(kt.gather_less(w.data(), w.size(), 0.5, vals.data()) == 2);
        CHECK(vals[0] == 0.1);
        CHECK(vals[1] == 0.1);
        CHECK(kt.gather_greater(w.data(), w.size(), 0.5, vals.data()) == 1);
        CHECK(vals[0] == 0.9);
    }

    SUBCASE("collect_less / collect_less_equal / collect_equal") {
        const std::vector<double> w{0.5, 0.1, 0.9, 0.1};
        std::vector<std::uint32_t> idx(w.size());
        CHECK(kt.collect_less(w.data(), w.size(), 0.5, idx.data()) == 2);
        CHECK(idx[0] == 1);
        CHECK(idx[1] == 3);
        CHECK(kt.collect_less_equal(w.data(), w.size(), 0.5, idx.data()) == 3);
        CHECK(idx[0] == 0);
        CHECK(idx[1] == 1);
        CHECK(idx[2] == 3);
        CHECK(kt.collect_equal(w.data(), w.size(), 0.1, idx.data(), 1) == 1);
        CHECK(idx[0] == 1);
        CHECK(kt.collect_equal(w.data(), w.size(), 0.1, idx.data(), 4) == 2);
    }

    SUBCASE("bin_indices clamps into the overflow bin") {
        const std::vector<double> w{0.1, 0.1, 2.6, 5.0, 1.0};
        std::vector<std::uint32_t> bins(w.size());
        kt.bin_indices(w.data(), w.size(), 1.0, 3, bins.data());
        CHECK(bins == std::vector<std::uint32_t>{0, 0, 2, 3, 1});
    }

    SUBCASE("all_nonnegative") {
        const std::vector<double> good{0.0, 1.0, 1e-300};
        const std::vector<double> bad{0.0, -1e-300};
        CHECK(kt.all_nonnegative(good.data(), good.size()));
        CHECK_FALSE(kt.all_nonnegative(bad.data(), bad.size()));
    }
}

TEST_CASE("kernel dispatch") {
    CHECK(kernels::table_by_name("scalar") == &kernels::scalar_table());
    CHECK(kernels::table_by_name("bogus") == nullptr);
    const kernels::Table* aut = kernels::table_by_name("auto");
    REQUIRE(aut != nullptr);
    if (kernels::avx2_supported()) {
        CHECK(aut == kernels::avx2_table());
    } else {
        CHECK(aut == &kernels::scalar_table());
    }
}

TEST_CASE("kth_smallest agrees with std::nth_element") {
    RandomStream rng(0xDEAD);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(400);
        std::vector<double> v(n);
        for (double& x : v) {
            x = rng.uniform01();
            if (rng.uniform_index(4) == 0) x = 0.25;  // heavy ties
        }
        const std::size_t rank = rng.uniform_index(static_cast<std::uint32_t>(n));
        std::vector<double> a = v, b = v;
        std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(rank),
                         a.end());
        const double got = kth_smallest(b.data(), n, rank);
        REQUIRE(got == a[rank]);
    }
    std::vector<double> equal(64, 1.5);
    CHECK(kth_smallest(equal.data(), equal.size(), 0) == 1.5);
    CHECK(kth_smallest(equal.data(), equal.size(), 63) == 1.5);
}

TEST_CASE("avx2 kernels match scalar bit for bit") {
    const kernels::Table* simd = kernels::avx2_table();
    if (simd == nullptr) {
        MESSAGE("AVX2 unavailable; equivalence checked on scalar only");
        return;
    }
    const auto& ref = kernels::scalar_table();
    RandomStream rng(0xC0FFEEULL);

    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2},
                          std::size_t{3}, std::size_t{4}, std::size_t{5},
                          std::size_t{7}, std::size_t{8}, std::size_t{9},
                          std::size_t{16}, std::size_t{33}, std::size_t{100},
                          std::size_t{1000}}) {
        CAPTURE(n);
        std::vector<double> w = random_values(rng, n, 3.0);
        if (n >= 4) {
            // exercise ties and negatives
            w[1] = w[0];
            w[3] = -w[2];
        }

        std::vector<double> a = w, b = w;
        const double addend = rng.uniform01();
        ref.add_to_all(a.data(), n, addend);
        simd->add_to_all(b.data(), n, addend);
        CHECK(bitwise_equal(a, b));

        const double threshold = n > 0 ? w[rng.uniform_index(
                                             static_cast<std::uint32_t>(n))]
                                       : 0.5;
        CHECK(ref.count_less(w.data(), n, threshold) ==
              simd->count_less(w.data(), n, threshold));
        CHECK(ref.count_less_equal(w.data(), n, threshold) ==
              simd->count_less_equal(w.data(), n, threshold));

        // gathers/collects specify only the first m entries
        auto prefix_equal = [](const auto& x, const auto& y, std::size_t m) {
            return std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m),
                              y.begin());
        };
        std::vector<double> ga(n), gb(n);
        std::size_t ma = ref.gather_less(w.data(), n, threshold, ga.data());
        std::size_t mb = simd->gather_less(w.data(), n, threshold, gb.data());
        CHECK(ma == mb);
        CHECK(prefix_equal(ga, gb, ma));
        ma = ref.gather_greater(w.data(), n, threshold, ga.data());
        mb = simd->gather_greater(w.data(), n, threshold, gb.data());
        CHECK(ma == mb);
        CHECK(prefix_equal(ga, gb, ma));

        std::vector<std::uint32_t> ia(n), ib(n);
        ma = ref.collect_less(w.data(), n, threshold, ia.data());
        mb = simd->collect_less(w.data(), n, threshold, ib.data());
        CHECK(ma == mb);
        CHECK(prefix_equal(ia, ib, ma));
        ma = ref.collect_less_equal(w.data(), n, threshold, ia.data());
        mb = simd->collect_less_equal(w.data(), n, threshold, ib.data());
        CHECK(ma == mb);
        CHECK(prefix_equal(ia, ib, ma));
        const std::size_t cap = n / 2 + 1;
        ma = ref.collect_equal(w.data(), n, threshold, ia.data(), cap);
        mb = simd->collect_equal(w.data(), n, threshold, ib.data(), cap);
        CHECK(ma == mb);
        CHECK(prefix_equal(ia, ib, ma));

        std::vector<std::uint32_t> ba(n), bb(n);
        ref.bin_indices(w.data(), n, 20.0, 200, ba.data());
        simd->bin_indices(w.data(), n, 20.0, 200, bb.data());
        CHECK(ba == bb);

        CHECK(ref.all_nonnegative(w.data(), n) ==
              simd->all_nonnegative(w.data(), n));
    }
}
