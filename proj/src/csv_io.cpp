#include "wealthsim/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wealthsim/errors.hpp"

namespace wealthsim {

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double out = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw SimulationError("bad numeric field '" + std::string(text) + "'");
    return out;
}

namespace {

std::string format_u64(std::uint64_t v) {
    char buf[24];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string render_pw_csv(const WealthHistogram& hist) {
    std::string out = "w_bin_center,density\n";
    for (std::size_t bin = 0; bin < hist.n_bins(); ++bin) {
        out += format_double(hist.bin_center(bin));
        out += ',';
        out += format_double(hist.density(bin));
        out += '\n';
    }
    return out;
}

std::string render_qw_csv(const EmpiricalCcdf& ccdf) {
    std::string out = "w,Q\n";
    for (const CcdfPoint& p : ccdf.points()) {
        out += format_double(p.w);
        out += ',';
        out += format_double(p.q);
        out += '\n';
    }
    return out;
}

std::string render_sweep_csv(const SweepResult& sweep) {
    std::string out = "f,w_m,lognormal_slope,r_squared,exponential_T,samples\n";
    for (const SweepRow& row : sweep.rows) {
        out += format_double(row.tax_rate);
        out += ',';
        out += format_double(row.modal_w);
        out += ',';
        out += format_double(row.lognormal ? lognormal_plot_slope(*row.lognormal)
                                           : kNan);
        out += ',';
        out += format_double(row.lognormal ? row.lognormal->r_squared : kNan);
        out += ',';
        out += format_double(row.exponential ? fitted_temperature(*row.exponential)
                                             : kNan);
        out += ',';
        out += format_u64(row.samples);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<double, double>> read_two_column_csv(
    const std::string& path, std::string_view expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SimulationError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != expected_header)
        throw SimulationError("'" + path + "': expected header '" +
                              std::string(expected_header) + "'");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw SimulationError("'" + path + "': malformed row '" + line + "'");
        rows.emplace_back(parse_double(std::string_view(line).substr(0, comma)),
                          parse_double(std::string_view(line).substr(comma + 1)));
    }
    return rows;
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SimulationError("cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw SimulationError("short write to '" + path + "'");
}

void MetaWriter::add(std::string_view key, std::string_view value) {
    text_ += key;
    text_ += '=';
    text_ += value;
    text_ += '\n';
}

void MetaWriter::add(std::string_view key, double value) {
    add(key, format_double(value));
}

void MetaWriter::add(std::string_view key, std::uint64_t value) {
    add(key, format_u64(value));
}

}  // namespace wealthsim
