#include "wealthsim/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "wealthsim/log.hpp"

namespace wealthsim {

void SimulationConfig::validate() const {
    params.validate();
    if (sample_sweeps < 1) throw ConfigError("sample_sweeps must be >= 1");
    if (sample_interval_sweeps < 1)
        throw ConfigError("sample_interval must be >= 1");
    if (n_realizations < 1) throw ConfigError("realizations must be >= 1");
    if (snapshots_per_realization() < 1)
        throw ConfigError("sample_sweeps must be >= sample_interval");
    if (!(histogram.bin_width > 0.0)) throw ConfigError("bin_width must be > 0");
    if (histogram.n_bins < 2) throw ConfigError("n_bins must be >= 2");
}

WealthHistogram make_histogram(const HistogramSettings& settings,
                               const ModelParams& params) {
    return WealthHistogram(settings.bin_width * params.mean_wealth(),
                           settings.n_bins);
}

namespace {

// Runs `count` tasks on up to `threads` workers pulling indices from a
// shared counter. Outputs must be stored per index by the task itself, so
// scheduling cannot influence anything observable. If tasks fail, the
// lowest-index exception is rethrown after all workers finish.
void run_indexed_tasks(std::size_t count, std::uint32_t threads,
                       const std::function<void(std::size_t)>& task) {
    if (count == 0) return;
    std::uint32_t n_workers = threads;
    if (n_workers == 0) {
        n_workers = std::thread::hardware_concurrency();
        if (n_workers == 0) n_workers = 1;
    }
    if (n_workers > count) n_workers = static_cast<std::uint32_t>(count);

    std::vector<std::exception_ptr> errors(count);
    auto guarded = [&](std::size_t index) {
        try {
            task(index);
        } catch (...) {
            errors[index] = std::current_exception();
        }
    };

    if (n_workers == 1) {
        for (std::size_t i = 0; i < count; ++i) guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                guarded(i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::uint32_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct RealizationOutput {
    WealthHistogram first_half;
    WealthHistogram second_half;
    double max_drift = 0.0;
};

RealizationOutput run_realization(const SimulationConfig& config,
                                  std::uint32_t realization,
                                  const kernels::Table& table) {
    const std::uint64_t seed =
        derive_seed(config.master_seed, config.stream_id, realization);
    TradeEngine engine(config.params, seed, table);
    engine.run_sweeps(config.burn_in_sweeps);

    const std::uint64_t snapshots = config.snapshots_per_realization();
    const std::uint64_t first_count = snapshots - snapshots / 2;
    RealizationOutput out{make_histogram(config.histogram, config.params),
                          make_histogram(config.histogram, config.params)};

    for (std::uint64_t s = 0; s < snapshots; ++s) {
        engine.run_sweeps(config.sample_interval_sweeps);
        auto& half = s < first_count ? out.first_half : out.second_half;
        half.accumulate(engine.state().wealth, table);

        const double drift = engine.conservation_drift();
        if (drift > out.max_drift) out.max_drift = drift;
        if (drift > kConservationTolerance) {
            std::ostringstream msg;
            msg << "conservation breach: relative drift " << drift
                << " at tax_rate=" << config.params.tax_rate
                << " realization=" << realization
                << " trade=" << engine.state().time;
            throw SimulationError(msg.str());
        }
    }
    if (!engine.all_nonnegative()) {
        std::ostringstream msg;
        msg << "negative wealth at tax_rate=" << config.params.tax_rate
            << " realization=" << realization;
        throw SimulationError(msg.str());
    }
    return out;
}

RunResult assemble_run(const SimulationConfig& config,
                       std::vector<RealizationOutput>& parts) {
    WealthHistogram first = make_histogram(config.histogram, config.params);
    WealthHistogram second = make_histogram(config.histogram, config.params);
    double max_drift = 0.0;
    for (const RealizationOutput& part : parts) {  // merge in index order
        first.merge(part.first_half);
        second.merge(part.second_half);
        if (part.max_drift > max_drift) max_drift = part.max_drift;
    }

    const double block_distance =
        second.total_observations() > 0
            ? l1_mass_distance(first, second)
            : std::numeric_limits<double>::quiet_NaN();

    WealthHistogram merged = first;
    merged.merge(second);

    EmpiricalCcdf ccdf = empirical_ccdf(merged);
    const double modal_w = modal_wealth(merged);

    std::optional<TailFit> lognormal;
    try {
        lognormal = fit_lognormal_slope(ccdf, modal_w);
    } catch (const InsufficientDataError&) {
    }
    std::optional<TailFit> exponential;
    try {
        exponential = fit_exponential(ccdf);
    } catch (const InsufficientDataError&) {
    }

    if (merged.overflow_fraction() > 1e-3) {
        log::warn("histogram overflow fraction %.3g exceeds 0.1%% "
                  "(tax_rate=%g); consider widening the range",
                  merged.overflow_fraction(), config.params.tax_rate);
    }

    return RunResult{std::move(merged),  std::move(ccdf), modal_w,
                     lognormal,          exponential,     block_distance,
                     max_drift};
}

}  // namespace

RunResult run_simulation(const SimulationConfig& config,
                         const ExecutionOptions& exec) {
    config.validate();
    const kernels::Table& table =
        exec.table != nullptr ? *exec.table : kernels::active_table();

    std::vector<RealizationOutput> parts(
        config.n_realizations,
        RealizationOutput{make_histogram(config.histogram, config.params),
                          make_histogram(config.histogram, config.params)});
    run_indexed_tasks(config.n_realizations, exec.threads, [&](std::size_t r) {
        parts[r] = run_realization(config, static_cast<std::uint32_t>(r), table);
    });
    return assemble_run(config, parts);
}

SweepResult sweep_tax(const SimulationConfig& config,
                      std::span<const double> f_values,
                      const ExecutionOptions& exec) {
    config.validate();
    if (f_values.empty()) throw ConfigError("tax_grid must not be empty");
    for (std::size_t k = 0; k < f_values.size(); ++k) {
        if (!(f_values[k] >= 0.0 && f_values[k] <= 1.0))
            throw ConfigError("tax_grid values must be in [0, 1]");
        if (k > 0 && !(f_values[k] > f_values[k - 1]))
            throw ConfigError("tax_grid must be strictly ascending");
    }
    const kernels::Table& table =
        exec.table != nullptr ? *exec.table : kernels::active_table();

    // One task per (grid point, realization); merged per grid point in
    // realization order afterwards.
    const std::size_t n_real = config.n_realizations;
    const std::size_t n_tasks = f_values.size() * n_real;
    std::vector<RealizationOutput> parts(
        n_tasks,
        RealizationOutput{make_histogram(config.histogram, config.params),
                          make_histogram(config.histogram, config.params)});

    run_indexed_tasks(n_tasks, exec.threads, [&](std::size_t t) {
        const std::size_t f_index = t / n_real;
        const auto realization = static_cast<std::uint32_t>(t % n_real);
        SimulationConfig point = config;
        point.params.tax_rate = f_values[f_index];
        point.stream_id = static_cast<std::uint32_t>(f_index);
        parts[t] = run_realization(point, realization, table);
    });

    SweepResult sweep;
    sweep.rows.reserve(f_values.size());
    for (std::size_t f_index = 0; f_index < f_values.size(); ++f_index) {
        SimulationConfig point = config;
        point.params.tax_rate = f_values[f_index];
        point.stream_id = static_cast<std::uint32_t>(f_index);

        std::vector<RealizationOutput> slice(
            parts.begin() + static_cast<std::ptrdiff_t>(f_index * n_real),
            parts.begin() + static_cast<std::ptrdiff_t>((f_index + 1) * n_real));
        RunResult result = assemble_run(point, slice);

        sweep.rows.push_back(SweepRow{
            f_values[f_index], result.modal_w, result.lognormal,
            result.exponential, result.histogram.total_observations(),
            result.block_distance, result.max_conservation_drift});
        log::info("sweep point tax_rate=%.4g done: w_m=%.4g",
                  f_values[f_index], result.modal_w);
    }
    return sweep;
}

double find_optimal_tax(const SweepResult& sweep,
                        OptimalTaxCriterion criterion) {
    if (sweep.rows.empty())
        throw ConfigError("find_optimal_tax: empty sweep");
    if (criterion == OptimalTaxCriterion::MinSlope) {
        for (const SweepRow& row : sweep.rows) {
            if (!row.lognormal.has_value()) {
                std::ostringstream msg;
                msg << "find_optimal_tax: missing slope fit at tax_rate="
                    << row.tax_rate;
                throw SimulationError(msg.str());
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < sweep.rows.size(); ++k) {
        if (criterion == OptimalTaxCriterion::MaxMode) {
            if (sweep.rows[k].modal_w > sweep.rows[best].modal_w) best = k;
        } else {
            if (lognormal_plot_slope(*sweep.rows[k].lognormal) <
                lognormal_plot_slope(*sweep.rows[best].lognormal))
                best = k;
        }
    }
    return sweep.rows[best].tax_rate;
}

double equilibration_check(EconomyState& state, const ModelParams& params,
                           std::uint64_t block_sweeps,
                           const HistogramSettings& settings,
                           const kernels::Table& table) {
    if (block_sweeps < 1) throw ConfigError("block_sweeps must be >= 1");
    TradeEngine engine(params, std::move(state), table);
    WealthHistogram first = make_histogram(settings, params);
    WealthHistogram second = make_histogram(settings, params);
    for (std::uint64_t s = 0; s < block_sweeps; ++s) {
        engine.run_sweeps(1);
        first.accumulate(engine.state().wealth, table);
    }
    for (std::uint64_t s = 0; s < block_sweeps; ++s) {
        engine.run_sweeps(1);
        second.accumulate(engine.state().wealth, table);
    }
    state = std::move(engine.state());
    return l1_mass_distance(first, second);
}

}  // namespace wealthsim
