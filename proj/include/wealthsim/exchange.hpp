#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wealthsim/kernels.hpp"
#include "wealthsim/model.hpp"

namespace wealthsim {

struct ExchangeResult {
    double wealth_i;
    double wealth_j;
    double pool;
};

// One taxed pairwise exchange. The pair's combined wealth is split by
// split_fraction after the tax pool f*(w_i + w_j) is deducted:
//
//   w_i' = (1 - f) * eps * (w_i + w_j)
//   w_j' = (1 - f) * (1 - eps) * (w_i + w_j)
//
// Both outputs and the pool are nonnegative whenever the inputs are, and
// w_i' + w_j' + pool equals w_i + w_j up to rounding.
ExchangeResult exchange(double wealth_i, double wealth_j,
                        double split_fraction, double tax_rate);

// Beneficiary set for one trade, evaluated on the post-deduction wealth
// vector. UniformAll: every index. PoorestFraction(q): the max(1, floor(q*N))
// smallest entries, ties at the cut broken toward the lower index. The
// returned indices are a set; ordering is unspecified.
std::vector<std::uint32_t> select_beneficiaries(
    std::span<const double> wealth, const RedistributionPolicy& policy);

// wealth[r] += pool/|S| for each r in S. Throws on an empty set, which the
// engine makes impossible by construction.
void redistribute(std::span<double> wealth, double pool,
                  std::span<const std::uint32_t> beneficiaries);

// Production trade engine. Owns the economy state plus reusable scratch
// buffers and runs the two-step trade (taxed exchange, then redistribution)
// through the dispatched kernel table.
class TradeEngine {
public:
    TradeEngine(const ModelParams& params, std::uint64_t seed,
                const kernels::Table& table = kernels::active_table());
    TradeEngine(const ModelParams& params, EconomyState state,
                const kernels::Table& table = kernels::active_table());

    // One trade; hot path, records nothing.
    void trade_step();

    // One trade with a full outcome record (allocates the beneficiary list).
    TradeOutcome trade_step_traced();

    // n_sweeps * N trades.
    void run_sweeps(std::uint64_t n_sweeps);

    const EconomyState& state() const { return state_; }
    EconomyState& state() { return state_; }
    const ModelParams& params() const { return params_; }
    const kernels::Table& table() const { return *table_; }

    // |sum(wealth) - W| / W with a compensated sum.
    double conservation_drift() const;

    // True when every wealth entry is >= 0.
    bool all_nonnegative() const;

private:
    // Applies the exchange for (i, j) with the given split fraction and
    // redistributes the pool. Shared by the traced and untraced paths;
    // when outcome is non-null the beneficiary set is materialized into it.
    void apply_trade(std::uint32_t i, std::uint32_t j, double split_fraction,
                     TradeOutcome* outcome);

    // Fills beneficiaries_ with the current beneficiary set (post-deduction
    // vector) and returns its size.
    std::uint32_t select_into_scratch();

    ModelParams params_;
    const kernels::Table* table_;
    EconomyState state_;
    std::vector<double> select_scratch_;
    std::vector<std::uint32_t> beneficiaries_;
    // Warm-start pivot for the poorest-k selection: the previous trade's
    // threshold plus the share it handed out. Only a performance hint; the
    // selected set is exact for any value. NaN until the first selection.
    double pivot_hint_;
};

}  // namespace wealthsim
