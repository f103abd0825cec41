#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wealthsim/kernels.hpp"

namespace wealthsim {

// Uniform-bin histogram over [0, n_bins * bin_width) with an explicit
// overflow counter. Accumulation across snapshots is additive, so partial
// histograms built in any order merge to the same counts.
class WealthHistogram {
public:
    WealthHistogram(double bin_width, std::size_t n_bins);

    void accumulate(std::span<const double> snapshot,
                    const kernels::Table& table = kernels::active_table());

    // Adds another histogram's counts; bin layout must match.
    void merge(const WealthHistogram& other);

    double bin_width() const { return bin_width_; }
    std::size_t n_bins() const { return n_bins_; }
    std::uint64_t total_observations() const { return total_; }
    std::uint64_t count(std::size_t bin) const { return counts_[bin]; }
    std::uint64_t overflow() const { return counts_[n_bins_]; }
    double overflow_fraction() const;

    // counts[bin] / (total * bin_width); total includes overflow.
    double density(std::size_t bin) const;

    double bin_edge(std::size_t i) const { return bin_width_ * static_cast<double>(i); }
    double bin_center(std::size_t bin) const {
        return bin_width_ * (static_cast<double>(bin) + 0.5);
    }

    std::span<const std::uint64_t> counts() const { return counts_; }

private:
    double bin_width_;
    double inv_width_;
    std::size_t n_bins_;
    std::vector<std::uint64_t> counts_;  // n_bins + 1; last entry = overflow
    std::uint64_t total_ = 0;
    std::vector<std::uint32_t> scratch_;
};

// L1 distance between the probability-mass vectors of two histograms
// (overflow included). 0 for identical shapes, 2 for disjoint support.
// Throws SimulationError on mismatched layouts or empty inputs.
double l1_mass_distance(const WealthHistogram& a, const WealthHistogram& b);

// Center of the densest bin, ties toward the lowest bin; the overflow
// counter is excluded. Throws on an empty histogram.
double modal_wealth(const WealthHistogram& hist);

struct CcdfPoint {
    double w;
    double q;
};

// Complementary cumulative distribution Q(w) sampled at bin edges:
// Q(edge_k) = fraction of observations at or above edge_k. Non-increasing;
// Q at edge 0 is 1, Q at the top edge is the overflow fraction.
class EmpiricalCcdf {
public:
    explicit EmpiricalCcdf(std::vector<CcdfPoint> points)
        : points_(std::move(points)) {}

    std::span<const CcdfPoint> points() const { return points_; }

private:
    std::vector<CcdfPoint> points_;
};

// Throws on an empty histogram.
EmpiricalCcdf empirical_ccdf(const WealthHistogram& hist);

// Ordinary least squares fit on transformed CCDF coordinates.
struct TailFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

// ln Q(w) against w over points with Q in (0, 1). For an exponential law
// Q = exp(-w/T) the slope is -1/T. Throws InsufficientDataError below 3
// usable points.
TailFit fit_exponential(const EmpiricalCcdf& ccdf);

// Temperature implied by an exponential tail fit.
inline double fitted_temperature(const TailFit& fit) { return -1.0 / fit.slope; }

// Slope of the CCDF's log-normal probability plot (probit of Q against
// ln w): the negative of the fitted 1/sigma. This is the curve whose level
// is reported per tax rate; it is most negative where the distribution is
// narrowest, so the egalitarian optimum sits at its minimum.
inline double lognormal_plot_slope(const TailFit& fit) { return -fit.slope; }

// Probit of 1 - Q(w) against ln w, restricted to the after-mode region
// w > modal_w (and Q in (0, 1)). For an exact log-normal(mu, sigma) law the
// slope is 1/sigma. Throws InsufficientDataError below 3 usable points.
TailFit fit_lognormal_slope(const EmpiricalCcdf& ccdf, double modal_w);

// Inverse standard normal CDF (Wichura's PPND16 rational approximation,
// absolute error well under 1e-9). Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

}  // namespace wealthsim
