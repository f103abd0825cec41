#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wealthsim/experiment.hpp"
#include "wealthsim/stats.hpp"

namespace wealthsim {

// All numeric output is serialized with 17 significant digits through
// std::to_chars, which is locale-independent and round-trips doubles
// bit-exactly. CSV files have a header row, '\n' line endings and
// deterministic row order.

std::string format_double(double v);
double parse_double(std::string_view text);  // throws SimulationError

// pw.csv: "w_bin_center,density", one row per regular bin.
std::string render_pw_csv(const WealthHistogram& hist);

// qw.csv: "w,Q", one row per bin edge (n_bins + 1 rows).
std::string render_qw_csv(const EmpiricalCcdf& ccdf);

// sweep.csv: "f,w_m,lognormal_slope,r_squared,exponential_T,samples".
// Missing fits serialize as nan.
std::string render_sweep_csv(const SweepResult& sweep);

// Parsed CSV pair for the `analyze` command and round-trip tests.
std::vector<std::pair<double, double>> read_two_column_csv(
    const std::string& path, std::string_view expected_header);

void write_file(const std::string& path, std::string_view contents);

// Ordered key=value document (run_meta and analyze output).
class MetaWriter {
public:
    void add(std::string_view key, std::string_view value);
    void add(std::string_view key, double value);
    void add(std::string_view key, std::uint64_t value);
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

}  // namespace wealthsim
