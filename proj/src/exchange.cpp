#include "wealthsim/exchange.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wealthsim/numeric.hpp"
#include "wealthsim/quickselect.hpp"

namespace wealthsim {

ExchangeResult exchange(double wealth_i, double wealth_j,
                        double split_fraction, double tax_rate) {
    assert(wealth_i >= 0.0 && wealth_j >= 0.0);
    assert(split_fraction >= 0.0 && split_fraction <= 1.0);
    assert(tax_rate >= 0.0 && tax_rate <= 1.0);
    const double combined = wealth_i + wealth_j;
    const double kept = 1.0 - tax_rate;
    ExchangeResult result;
    result.wealth_i = kept * split_fraction * combined;
    result.wealth_j = kept * (1.0 - split_fraction) * combined;
    result.pool = tax_rate * combined;
    return result;
}

namespace {

// Poorest-k selection. The pivot is the k-th smallest wealth value
// (quickselect on a scratch copy); the set is then every index strictly
// below the pivot plus the lowest-index ties until k indices are collected.
// This reproduces "k smallest by (wealth, index)" without sorting pairs.
std::uint32_t select_poorest(std::span<const double> wealth, std::uint32_t k,
                             const kernels::Table& table,
                             std::vector<double>& scratch,
                             std::uint32_t* out) {
    assert(k >= 1 && k <= wealth.size());
    scratch.assign(wealth.begin(), wealth.end());
    const auto kth = scratch.begin() + (k - 1);
    std::nth_element(scratch.begin(), kth, scratch.end());
    const double pivot = *kth;
    std::size_t m =
        table.collect_less(wealth.data(), wealth.size(), pivot, out);
    m += table.collect_equal(wealth.data(), wealth.size(), pivot, out + m,
                             k - m);
    assert(m == k);
    return k;
}

}  // namespace

std::vector<std::uint32_t> select_beneficiaries(
    std::span<const double> wealth, const RedistributionPolicy& policy) {
    assert(!wealth.empty());
    const auto n = static_cast<std::uint32_t>(wealth.size());
    if (policy.kind == RedistributionPolicy::Kind::UniformAll) {
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        return all;
    }
    const std::uint32_t k = policy.beneficiary_count(n);
    std::vector<std::uint32_t> out(k);
    std::vector<double> scratch;
    select_poorest(wealth, k, kernels::scalar_table(), scratch, out.data());
    std::sort(out.begin(), out.end());
    return out;
}

void redistribute(std::span<double> wealth, double pool,
                  std::span<const std::uint32_t> beneficiaries) {
    if (beneficiaries.empty())
        throw std::logic_error("redistribute: empty beneficiary set");
    assert(pool >= 0.0);
    const double share = pool / static_cast<double>(beneficiaries.size());
    for (std::uint32_t r : beneficiaries) wealth[r] += share;
}

TradeEngine::TradeEngine(const ModelParams& params, std::uint64_t seed,
                         const kernels::Table& table)
    : TradeEngine(params, init_state(params, seed), table) {}

TradeEngine::TradeEngine(const ModelParams& params, EconomyState state,
                         const kernels::Table& table)
    : params_(params),
      table_(&table),
      state_(std::move(state)),
      pivot_hint_(std::numeric_limits<double>::quiet_NaN()) {
    params_.validate();
    if (state_.wealth.size() != params_.n_agents)
        throw ConfigError("economy state does not match n_agents");
    select_scratch_.reserve(params_.n_agents);
    beneficiaries_.resize(params_.n_agents);
}

// Poorest-k selection with a warm-started quickselect: the previous trade's
// threshold (shifted by the share it paid out) partitions the vector first,
// so the rank selection runs only on the values the threshold actually moved
// across. The hint is a pure performance device; the resulting threshold and
// set are identical to a cold selection.
std::uint32_t TradeEngine::select_into_scratch() {
    const std::uint32_t k = params_.policy.beneficiary_count(params_.n_agents);
    const double* w = state_.wealth.data();
    const std::size_t n = state_.wealth.size();
    select_scratch_.resize(n);

    double threshold;
    if (!std::isfinite(pivot_hint_)) {
        std::copy(w, w + n, select_scratch_.begin());
        threshold = kth_smallest(select_scratch_.data(), n, k - 1);
    } else {
        const double probe = pivot_hint_;
        const std::size_t below =
            table_->gather_less(w, n, probe, select_scratch_.data());
        if (below >= k) {
            threshold = kth_smallest(select_scratch_.data(), below, k - 1);
        } else {
            const std::size_t at_or_below = table_->count_less_equal(w, n, probe);
            if (at_or_below >= k) {
                threshold = probe;
            } else {
                const std::size_t above =
                    table_->gather_greater(w, n, probe, select_scratch_.data());
                threshold = kth_smallest(select_scratch_.data(), above,
                                         k - at_or_below - 1);
            }
        }
    }
    pivot_hint_ = threshold;

    std::size_t m =
        table_->collect_less_equal(w, n, threshold, beneficiaries_.data());
    assert(m >= k);
    if (m > k) {
        // Drop the highest-index boundary ties: keep only the first
        // (ties - excess) entries equal to the threshold.
        std::size_t ties = 0;
        for (std::size_t q = 0; q < m; ++q)
            ties += w[beneficiaries_[q]] == threshold ? 1 : 0;
        const std::size_t keep_ties = ties - (m - k);
        std::size_t write = 0, seen = 0;
        for (std::size_t q = 0; q < m; ++q) {
            if (w[beneficiaries_[q]] == threshold && seen++ >= keep_ties)
                continue;
            beneficiaries_[write++] = beneficiaries_[q];
        }
        assert(write == k);
    }
    return k;
}

void TradeEngine::apply_trade(std::uint32_t i, std::uint32_t j,
                              double split_fraction, TradeOutcome* outcome) {
    auto& w = state_.wealth;
    const ExchangeResult ex = exchange(w[i], w[j], split_fraction, params_.tax_rate);
    w[i] = ex.wealth_i;
    w[j] = ex.wealth_j;

    if (outcome != nullptr) {
        outcome->agent_i = i;
        outcome->agent_j = j;
        outcome->split_fraction = split_fraction;
        outcome->pool = ex.pool;
        outcome->beneficiaries.clear();
    }

    // A zero pool makes redistribution a no-op (x + 0.0 == x bit-for-bit on
    // the nonnegative wealths this model produces), so it is skipped and the
    // outcome records an empty beneficiary set.
    if (ex.pool > 0.0) {
        if (params_.policy.kind == RedistributionPolicy::Kind::UniformAll) {
            const double share =
                ex.pool / static_cast<double>(params_.n_agents);
            table_->add_to_all(w.data(), w.size(), share);
            if (outcome != nullptr) {
                outcome->beneficiaries.resize(params_.n_agents);
                std::iota(outcome->beneficiaries.begin(),
                          outcome->beneficiaries.end(), 0u);
            }
        } else {
            const std::uint32_t k = select_into_scratch();
            const double share = ex.pool / static_cast<double>(k);
            for (std::uint32_t s = 0; s < k; ++s) w[beneficiaries_[s]] += share;
            // Members just gained `share`, so next trade's threshold sits
            // close to the old one shifted by it.
            pivot_hint_ += share;
            if (outcome != nullptr) {
                outcome->beneficiaries.assign(beneficiaries_.begin(),
                                              beneficiaries_.begin() + k);
                std::sort(outcome->beneficiaries.begin(),
                          outcome->beneficiaries.end());
            }
        }
    }
    ++state_.time;
}

void TradeEngine::trade_step() {
    const auto [i, j] = sample_pair(state_.rng, params_.n_agents);
    const double split_fraction = state_.rng.uniform01();
    apply_trade(i, j, split_fraction, nullptr);
}

TradeOutcome TradeEngine::trade_step_traced() {
    const auto [i, j] = sample_pair(state_.rng, params_.n_agents);
    const double split_fraction = state_.rng.uniform01();
    TradeOutcome outcome;
    apply_trade(i, j, split_fraction, &outcome);
    return outcome;
}

void TradeEngine::run_sweeps(std::uint64_t n_sweeps) {
    const std::uint64_t trades = n_sweeps * params_.n_agents;
    for (std::uint64_t t = 0; t < trades; ++t) trade_step();
}

double TradeEngine::conservation_drift() const {
    const double total = compensated_sum(state_.wealth);
    return std::abs(total - params_.total_wealth) / params_.total_wealth;
}

bool TradeEngine::all_nonnegative() const {
    return table_->all_nonnegative(state_.wealth.data(), state_.wealth.size());
}

}  // namespace wealthsim
