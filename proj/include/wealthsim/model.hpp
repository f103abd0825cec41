#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wealthsim/errors.hpp"
#include "wealthsim/rng.hpp"

namespace wealthsim {

// Who receives the tax pool collected on each trade.
struct RedistributionPolicy {
    enum class Kind { UniformAll, PoorestFraction };

    Kind kind = Kind::UniformAll;
    double fraction = 1.0;  // q, meaningful for PoorestFraction only

    static RedistributionPolicy uniform_all() { return {Kind::UniformAll, 1.0}; }

    static RedistributionPolicy poorest_fraction(double q) {
        return {Kind::PoorestFraction, q};
    }

    // max(1, floor(q*N)) recipients; UniformAll means everyone. The floor is
    // taken on the double product, which is the documented behavior.
    std::uint32_t beneficiary_count(std::uint32_t n_agents) const {
        if (kind == Kind::UniformAll) return n_agents;
        const auto k = static_cast<std::uint32_t>(
            std::floor(fraction * static_cast<double>(n_agents)));
        return k < 1 ? 1 : k;
    }

    void validate() const {
        if (kind == Kind::PoorestFraction && !(fraction > 0.0 && fraction <= 1.0))
            throw ConfigError("poorest_fraction must be in (0, 1]");
    }
};

struct ModelParams {
    std::uint32_t n_agents = 0;
    double total_wealth = 0.0;
    double tax_rate = 0.0;
    RedistributionPolicy policy;

    double mean_wealth() const {
        return total_wealth / static_cast<double>(n_agents);
    }

    void validate() const {
        if (n_agents < 2) throw ConfigError("n_agents must be >= 2");
        if (!(total_wealth > 0.0)) throw ConfigError("total_wealth must be > 0");
        if (!(tax_rate >= 0.0 && tax_rate <= 1.0))
            throw ConfigError("tax_rate must be in [0, 1]");
        policy.validate();
    }
};

// Mutable state of one realization: the wealth vector, the trade counter and
// the random stream driving it. Not safe for concurrent mutation; movable
// between threads when quiescent.
struct EconomyState {
    std::vector<double> wealth;
    std::uint64_t time = 0;
    RandomStream rng;

    EconomyState(std::vector<double> w, std::uint64_t seed)
        : wealth(std::move(w)), rng(seed) {}
};

// Equal-shares initial condition: wealth[i] = W/N, t = 0.
inline EconomyState init_state(const ModelParams& params, std::uint64_t seed) {
    params.validate();
    std::vector<double> wealth(params.n_agents, params.mean_wealth());
    return EconomyState(std::move(wealth), seed);
}

// Record of a single trade, for tracing and tests.
struct TradeOutcome {
    std::uint32_t agent_i = 0;
    std::uint32_t agent_j = 0;
    double split_fraction = 0.0;  // share of the taxed pair wealth kept by i
    double pool = 0.0;            // tax collected on this trade
    std::vector<std::uint32_t> beneficiaries;
};

}  // namespace wealthsim
