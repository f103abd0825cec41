#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wealthsim/exchange.hpp"
#include "wealthsim/model.hpp"
#include "wealthsim/stats.hpp"

namespace wealthsim {

// Relative drift of total wealth that aborts a run when exceeded.
inline constexpr double kConservationTolerance = 1e-9;

// Histogram layout. bin_width is expressed in units of the mean wealth W/N,
// so the default 0.05 x 200 covers [0, 10] mean-wealth units at any W and N.
struct HistogramSettings {
    double bin_width = 0.05;
    std::size_t n_bins = 200;
};

WealthHistogram make_histogram(const HistogramSettings& settings,
                               const ModelParams& params);

struct SimulationConfig {
    ModelParams params;
    std::uint64_t burn_in_sweeps = 2000;
    std::uint64_t sample_sweeps = 1000;
    std::uint64_t sample_interval_sweeps = 2;
    std::uint32_t n_realizations = 10;
    std::uint64_t master_seed = 0;
    HistogramSettings histogram;
    // Seed-stream index; sweep_tax sets it to the grid position so every
    // sweep point draws from a disjoint family of realization seeds.
    std::uint32_t stream_id = 0;

    std::uint64_t snapshots_per_realization() const {
        return sample_sweeps / sample_interval_sweeps;
    }

    void validate() const;
};

// How to run: worker count and kernel table. threads == 0 means as many as
// the hardware offers (capped by the task count). Results are independent of
// the thread count by construction.
struct ExecutionOptions {
    std::uint32_t threads = 0;
    const kernels::Table* table = nullptr;  // null -> active_table()
};

struct RunResult {
    WealthHistogram histogram;  // merged over realizations, in index order
    EmpiricalCcdf ccdf;
    double modal_w = 0.0;
    std::optional<TailFit> lognormal;
    std::optional<TailFit> exponential;
    // L1 distance between the histograms of the first and second half of
    // the snapshot sequence; NaN when there are fewer than 2 snapshots.
    double block_distance = 0.0;
    // Max over realizations of the end-of-run conservation drift.
    double max_conservation_drift = 0.0;
};

// Equilibrate and sample n_realizations independent realizations, merge
// their snapshot histograms and compute all observables. Realization r uses
// seed derive_seed(master_seed, stream_id, r); execution order never affects
// the result. Throws SimulationError if any realization breaches
// kConservationTolerance.
RunResult run_simulation(const SimulationConfig& config,
                         const ExecutionOptions& exec = {});

struct SweepRow {
    double tax_rate = 0.0;
    double modal_w = 0.0;
    std::optional<TailFit> lognormal;
    std::optional<TailFit> exponential;
    std::uint64_t samples = 0;
    double block_distance = 0.0;
    double max_conservation_drift = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ascending in tax_rate, one per grid point
};

// One run_simulation per tax rate; grid point k runs with stream_id = k.
// f_values must be strictly ascending within [0, 1]. Failures are reported
// with the offending tax rate. Points may execute concurrently.
SweepResult sweep_tax(const SimulationConfig& config,
                      std::span<const double> f_values,
                      const ExecutionOptions& exec = {});

enum class OptimalTaxCriterion { MaxMode, MinSlope };

// Grid point optimizing the criterion: the row with maximal modal wealth, or
// with minimal log-normal slope. Ties break toward the smaller tax rate; no
// interpolation. MinSlope requires a slope fit on every row.
double find_optimal_tax(const SweepResult& sweep, OptimalTaxCriterion criterion);

// Steady-state diagnostic: advances the state through two consecutive blocks
// of block_sweeps sweeps (one snapshot per sweep) and returns the L1 mass
// distance between the two block histograms. The state is advanced in place.
double equilibration_check(EconomyState& state, const ModelParams& params,
                           std::uint64_t block_sweeps,
                           const HistogramSettings& settings = {},
                           const kernels::Table& table = kernels::active_table());

// Distance above which the diagnostic is reported as suspect.
inline constexpr double kEquilibrationWarnThreshold = 0.02;

}  // namespace wealthsim
