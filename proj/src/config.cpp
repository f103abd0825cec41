#include "wealthsim/config.hpp"

#include <charconv>
#include <map>

#include "wealthsim/errors.hpp"

namespace wealthsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
    throw ConfigError("config key '" + std::string(key) + "': value '" +
                      std::string(value) + "' is not " + std::string(expected));
}

double to_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        bad_value(key, value, "a number");
    return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        bad_value(key, value, "a nonnegative integer");
    return out;
}

const char* const kKnownKeys[] = {
    "n_agents",      "total_wealth",     "tax_rate",      "tax_grid",
    "policy",        "poorest_fraction", "burn_in_sweeps", "sample_sweeps",
    "sample_interval", "realizations",   "seed",          "bin_width",
    "n_bins",        "output_dir",
};

bool known_key(std::string_view key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

}  // namespace

std::vector<double> parse_tax_grid(std::string_view text) {
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        // start:step:stop, stop included up to half a step of slack
        const std::size_t c1 = text.find(':');
        const std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
            bad_value("tax_grid", text, "of the form start:step:stop");
        const double start = to_double("tax_grid", trim(text.substr(0, c1)));
        const double step = to_double("tax_grid", trim(text.substr(c1 + 1, c2 - c1 - 1)));
        const double stop = to_double("tax_grid", trim(text.substr(c2 + 1)));
        if (!(step > 0.0)) bad_value("tax_grid", text, "a grid with step > 0");
        if (stop < start) bad_value("tax_grid", text, "a grid with stop >= start");
        for (std::size_t k = 0;; ++k) {
            const double v = start + static_cast<double>(k) * step;
            if (v > stop + 0.5 * step) break;
            grid.push_back(v);
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = text.find(',', pos);
            const std::string_view token =
                trim(text.substr(pos, comma == std::string_view::npos
                                          ? std::string_view::npos
                                          : comma - pos));
            if (token.empty()) bad_value("tax_grid", text, "a comma list of numbers");
            grid.push_back(to_double("tax_grid", token));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0 && grid[k] <= 1.0))
            bad_value("tax_grid", text, "within [0, 1]");
        if (k > 0 && !(grid[k] > grid[k - 1]))
            bad_value("tax_grid", text, "strictly ascending");
    }
    return grid;
}

FileConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> entries;

    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        const std::size_t nl = text.find('\n', line_start);
        const std::string_view line = trim(text.substr(
            line_start,
            nl == std::string_view::npos ? std::string_view::npos : nl - line_start));
        line_start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line is not key=value: '" +
                              std::string(line) + "'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!known_key(key))
            throw ConfigError("unknown config key '" + std::string(key) + "'");
        if (!entries.emplace(std::string(key), std::string(value)).second)
            throw ConfigError("duplicate config key '" + std::string(key) + "'");
    }

    auto lookup = [&](std::string_view key) -> const std::string* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto require = [&](std::string_view key) -> const std::string& {
        const std::string* v = lookup(key);
        if (v == nullptr)
            throw ConfigError("missing required config key '" +
                              std::string(key) + "'");
        return *v;
    };

    FileConfig out;
    SimulationConfig& sim = out.sim;

    const std::uint64_t n_agents_raw = to_u64("n_agents", require("n_agents"));
    if (n_agents_raw < 2 || n_agents_raw > 0xFFFFFFFFull)
        bad_value("n_agents", require("n_agents"), "an integer in [2, 2^32)");
    sim.params.n_agents = static_cast<std::uint32_t>(n_agents_raw);

    sim.master_seed = to_u64("seed", require("seed"));

    // W defaults to N so the mean wealth is 1.
    sim.params.total_wealth = static_cast<double>(sim.params.n_agents);
    if (const std::string* v = lookup("total_wealth")) {
        sim.params.total_wealth = to_double("total_wealth", *v);
        if (!(sim.params.total_wealth > 0.0)) bad_value("total_wealth", *v, "> 0");
    }

    if (const std::string* v = lookup("tax_rate")) {
        sim.params.tax_rate = to_double("tax_rate", *v);
        if (!(sim.params.tax_rate >= 0.0 && sim.params.tax_rate <= 1.0))
            bad_value("tax_rate", *v, "within [0, 1]");
    }

    out.tax_grid = parse_tax_grid(lookup("tax_grid") != nullptr
                                      ? std::string_view(*lookup("tax_grid"))
                                      : std::string_view("0:0.05:0.95"));

    sim.params.policy = RedistributionPolicy::uniform_all();
    double poorest_fraction = 0.2;
    if (const std::string* v = lookup("poorest_fraction")) {
        poorest_fraction = to_double("poorest_fraction", *v);
        if (!(poorest_fraction > 0.0 && poorest_fraction <= 1.0))
            bad_value("poorest_fraction", *v, "within (0, 1]");
    }
    if (const std::string* v = lookup("policy")) {
        if (*v == "uniform_all") {
            sim.params.policy = RedistributionPolicy::uniform_all();
        } else if (*v == "poorest") {
            sim.params.policy = RedistributionPolicy::poorest_fraction(poorest_fraction);
        } else {
            bad_value("policy", *v, "one of uniform_all | poorest");
        }
    }

    if (const std::string* v = lookup("burn_in_sweeps"))
        sim.burn_in_sweeps = to_u64("burn_in_sweeps", *v);
    if (const std::string* v = lookup("sample_sweeps")) {
        sim.sample_sweeps = to_u64("sample_sweeps", *v);
        if (sim.sample_sweeps < 1) bad_value("sample_sweeps", *v, ">= 1");
    }
    if (const std::string* v = lookup("sample_interval")) {
        sim.sample_interval_sweeps = to_u64("sample_interval", *v);
        if (sim.sample_interval_sweeps < 1) bad_value("sample_interval", *v, ">= 1");
    }
    if (const std::string* v = lookup("realizations")) {
        const std::uint64_t r = to_u64("realizations", *v);
        if (r < 1 || r > 0xFFFFFFFFull) bad_value("realizations", *v, "in [1, 2^32)");
        sim.n_realizations = static_cast<std::uint32_t>(r);
    }
    if (const std::string* v = lookup("bin_width")) {
        sim.histogram.bin_width = to_double("bin_width", *v);
        if (!(sim.histogram.bin_width > 0.0)) bad_value("bin_width", *v, "> 0");
    }
    if (const std::string* v = lookup("n_bins")) {
        const std::uint64_t b = to_u64("n_bins", *v);
        if (b < 2 || b > 0x7FFFFFFFull) bad_value("n_bins", *v, "in [2, 2^31)");
        sim.histogram.n_bins = static_cast<std::size_t>(b);
    }
    if (const std::string* v = lookup("output_dir")) out.output_dir = *v;

    sim.validate();
    return out;
}

}  // namespace wealthsim
