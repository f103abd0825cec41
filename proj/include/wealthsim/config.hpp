#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wealthsim/experiment.hpp"

namespace wealthsim {

// Parsed key=value config file. Keys (defaults in parentheses, all
// overridable; n_agents and seed are required):
//
//   n_agents          number of agents, >= 2                      (required)
//   seed              master seed, u64                            (required)
//   total_wealth      total wealth W > 0                          (n_agents, i.e. W/N = 1)
//   tax_rate          f in [0, 1], used by `run`                  (0)
//   tax_grid          grid for `sweep`: "a:step:b" or "a,b,c"     (0:0.05:0.95)
//   policy            uniform_all | poorest                       (uniform_all)
//   poorest_fraction  q in (0, 1], used when policy=poorest       (0.2)
//   burn_in_sweeps    sweeps discarded before sampling            (2000)
//   sample_sweeps     sweeps in the sampling phase                (1000)
//   sample_interval   sweeps between snapshots                    (2)
//   realizations      independent realizations merged             (10)
//   bin_width         histogram bin width in units of W/N         (0.05)
//   n_bins            regular bins before the overflow counter    (200)
//   output_dir        where CSV output lands                      (.)
//
// Lines starting with '#' and blank lines are ignored. Unknown keys, missing
// required keys and out-of-range values raise ConfigError naming the key.
struct FileConfig {
    SimulationConfig sim;
    std::vector<double> tax_grid;
    std::string output_dir = ".";
};

FileConfig parse_config(std::string_view text);

// "a:step:b" (inclusive of b up to half a step) or a comma list. Values must
// be strictly ascending within [0, 1].
std::vector<double> parse_tax_grid(std::string_view text);

}  // namespace wealthsim
