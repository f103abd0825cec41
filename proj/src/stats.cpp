#include "wealthsim/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "wealthsim/errors.hpp"

namespace wealthsim {

WealthHistogram::WealthHistogram(double bin_width, std::size_t n_bins)
    : bin_width_(bin_width),
      inv_width_(1.0 / bin_width),
      n_bins_(n_bins),
      counts_(n_bins + 1, 0) {
    if (!(bin_width > 0.0)) throw ConfigError("bin_width must be > 0");
    if (n_bins < 2) throw ConfigError("n_bins must be >= 2");
}

void WealthHistogram::accumulate(std::span<const double> snapshot,
                                 const kernels::Table& table) {
    scratch_.resize(snapshot.size());
    table.bin_indices(snapshot.data(), snapshot.size(), inv_width_,
                      static_cast<std::uint32_t>(n_bins_), scratch_.data());
    for (std::uint32_t bin : scratch_) ++counts_[bin];
    total_ += snapshot.size();
}

void WealthHistogram::merge(const WealthHistogram& other) {
    if (other.bin_width_ != bin_width_ || other.n_bins_ != n_bins_)
        throw SimulationError("histogram merge: mismatched bin layout");
    for (std::size_t b = 0; b < counts_.size(); ++b)
        counts_[b] += other.counts_[b];
    total_ += other.total_;
}

double WealthHistogram::overflow_fraction() const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(counts_[n_bins_]) / static_cast<double>(total_);
}

double WealthHistogram::density(std::size_t bin) const {
    return static_cast<double>(counts_[bin]) /
           (static_cast<double>(total_) * bin_width_);
}

double l1_mass_distance(const WealthHistogram& a, const WealthHistogram& b) {
    if (a.bin_width() != b.bin_width() || a.n_bins() != b.n_bins())
        throw SimulationError("l1_mass_distance: mismatched bin layout");
    if (a.total_observations() == 0 || b.total_observations() == 0)
        throw SimulationError("l1_mass_distance: empty histogram");
    const auto ta = static_cast<double>(a.total_observations());
    const auto tb = static_cast<double>(b.total_observations());
    double distance = 0.0;
    for (std::size_t bin = 0; bin <= a.n_bins(); ++bin) {
        const double ma = static_cast<double>(a.count(bin)) / ta;
        const double mb = static_cast<double>(b.count(bin)) / tb;
        distance += std::abs(ma - mb);
    }
    return distance;
}

double modal_wealth(const WealthHistogram& hist) {
    if (hist.total_observations() == 0)
        throw SimulationError("modal_wealth: empty histogram");
    std::size_t best = 0;
    for (std::size_t bin = 1; bin < hist.n_bins(); ++bin) {
        if (hist.count(bin) > hist.count(best)) best = bin;
    }
    return hist.bin_center(best);
}

EmpiricalCcdf empirical_ccdf(const WealthHistogram& hist) {
    const std::uint64_t total = hist.total_observations();
    if (total == 0) throw SimulationError("empirical_ccdf: empty histogram");
    std::vector<CcdfPoint> points;
    points.reserve(hist.n_bins() + 1);
    std::uint64_t below = 0;
    for (std::size_t edge = 0; edge <= hist.n_bins(); ++edge) {
        const double q = static_cast<double>(total - below) /
                         static_cast<double>(total);
        points.push_back({hist.bin_edge(edge), q});
        if (edge < hist.n_bins()) below += hist.count(edge);
    }
    return EmpiricalCcdf(std::move(points));
}

namespace {

struct XY {
    std::vector<double> x;
    std::vector<double> y;
};

TailFit least_squares(const XY& data) {
    const std::size_t n = data.x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += data.x[i];
        mean_y += data.y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = data.x[i] - mean_x;
        const double dy = data.y[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw InsufficientDataError("fit: degenerate abscissa (all x equal)");

    TailFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.n_points = n;
    return fit;
}

}  // namespace

TailFit fit_exponential(const EmpiricalCcdf& ccdf) {
    XY data;
    for (const CcdfPoint& p : ccdf.points()) {
        if (p.q > 0.0 && p.q < 1.0) {
            data.x.push_back(p.w);
            data.y.push_back(std::log(p.q));
        }
    }
    if (data.x.size() < 3)
        throw InsufficientDataError(
            "fit_exponential: fewer than 3 points with Q in (0,1)");
    return least_squares(data);
}

TailFit fit_lognormal_slope(const EmpiricalCcdf& ccdf, double modal_w) {
    XY data;
    for (const CcdfPoint& p : ccdf.points()) {
        if (p.w > modal_w && p.w > 0.0 && p.q > 0.0 && p.q < 1.0) {
            data.x.push_back(std::log(p.w));
            data.y.push_back(normal_quantile(1.0 - p.q));
        }
    }
    if (data.x.size() < 3)
        throw InsufficientDataError(
            "fit_lognormal_slope: fewer than 3 usable after-mode points");
    return least_squares(data);
}

// Wichura's algorithm AS241, routine PPND16.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must be in (0, 1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r +
                       3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r +
                     4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r +
                   1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r +
                 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r +
                   2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r +
                 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r +
               6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r +
             1.0);
        return num / den;
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r +
                   2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r +
                 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r +
               5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r +
             1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r +
                   5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r +
                 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r +
               1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r +
             1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r +
                   2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r +
                 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r +
               1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r +
             6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r +
                   1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r +
                 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r +
               1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r +
             1.0);
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

}  // namespace wealthsim
