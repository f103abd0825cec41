// Command-line front end: `run` and `sweep` execute simulations from a
// key=value config file and emit CSV bundles; `analyze` refits observables
// from an existing pw.csv/qw.csv pair.
//
// Exit codes: 0 success, 2 config/usage error, 1 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wealthsim/config.hpp"
#include "wealthsim/csv_io.hpp"
#include "wealthsim/experiment.hpp"
#include "wealthsim/log.hpp"
#include "wealthsim/version.hpp"

namespace ws = wealthsim;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    std::uint32_t threads = 0;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ws::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ws::FileConfig load_config(const CommonArgs& args) {
    ws::FileConfig fc = ws::parse_config(read_text_file(args.config_path));
    if (args.seed_override) fc.sim.master_seed = *args.seed_override;
    if (args.out_override) fc.output_dir = *args.out_override;
    return fc;
}

std::string policy_name(const ws::RedistributionPolicy& policy) {
    return policy.kind == ws::RedistributionPolicy::Kind::UniformAll
               ? "uniform_all"
               : "poorest";
}

void echo_config(ws::MetaWriter& meta, const ws::FileConfig& fc,
                 const CommonArgs& args) {
    const ws::SimulationConfig& sim = fc.sim;
    meta.add("engine_version", WEALTHSIM_VERSION);
    meta.add("kernel", ws::kernels::active_table().name);
    meta.add("threads", std::uint64_t{args.threads});
    meta.add("n_agents", std::uint64_t{sim.params.n_agents});
    meta.add("total_wealth", sim.params.total_wealth);
    meta.add("policy", policy_name(sim.params.policy));
    if (sim.params.policy.kind == ws::RedistributionPolicy::Kind::PoorestFraction)
        meta.add("poorest_fraction", sim.params.policy.fraction);
    meta.add("burn_in_sweeps", sim.burn_in_sweeps);
    meta.add("sample_sweeps", sim.sample_sweeps);
    meta.add("sample_interval", sim.sample_interval_sweeps);
    meta.add("realizations", std::uint64_t{sim.n_realizations});
    meta.add("seed", sim.master_seed);
    meta.add("bin_width", sim.histogram.bin_width);
    meta.add("n_bins", std::uint64_t{sim.histogram.n_bins});
    meta.add("output_dir", fc.output_dir);
}

void write_outputs(const std::string& dir,
                   std::initializer_list<std::pair<const char*, const std::string*>> files) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : files)
        ws::write_file(dir + "/" + name, *contents);
}

int cmd_run(const CommonArgs& args) {
    const ws::FileConfig fc = load_config(args);
    const ws::ExecutionOptions exec{args.threads, nullptr};

    const auto t0 = std::chrono::steady_clock::now();
    const ws::RunResult result = ws::run_simulation(fc.sim, exec);
    const std::chrono::duration<double> wall =
        std::chrono::steady_clock::now() - t0;

    const std::string pw = ws::render_pw_csv(result.histogram);
    const std::string qw = ws::render_qw_csv(result.ccdf);

    ws::MetaWriter meta;
    meta.add("command", "run");
    echo_config(meta, fc, args);
    meta.add("tax_rate", fc.sim.params.tax_rate);
    meta.add("samples", result.histogram.total_observations());
    meta.add("w_m", result.modal_w);
    meta.add("lognormal_slope",
             result.lognormal ? ws::lognormal_plot_slope(*result.lognormal) : NAN);
    meta.add("lognormal_r_squared",
             result.lognormal ? result.lognormal->r_squared : NAN);
    meta.add("exponential_T",
             result.exponential ? ws::fitted_temperature(*result.exponential) : NAN);
    meta.add("exponential_r_squared",
             result.exponential ? result.exponential->r_squared : NAN);
    meta.add("block_distance", result.block_distance);
    meta.add("overflow_fraction", result.histogram.overflow_fraction());
    meta.add("conservation_drift", result.max_conservation_drift);
    meta.add("wall_time_seconds", wall.count());

    write_outputs(fc.output_dir, {{"pw.csv", &pw},
                                  {"qw.csv", &qw},
                                  {"run_meta.txt", &meta.text()}});

    std::printf("w_m=%s\n", ws::format_double(result.modal_w).c_str());
    std::printf("lognormal_slope=%s\n",
                ws::format_double(result.lognormal
                                      ? ws::lognormal_plot_slope(*result.lognormal)
                                      : NAN).c_str());
    std::printf("exponential_T=%s\n",
                ws::format_double(result.exponential
                                      ? ws::fitted_temperature(*result.exponential)
                                      : NAN).c_str());
    std::printf("conservation_drift=%s\n",
                ws::format_double(result.max_conservation_drift).c_str());
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const ws::FileConfig fc = load_config(args);
    const ws::ExecutionOptions exec{args.threads, nullptr};

    const auto t0 = std::chrono::steady_clock::now();
    const ws::SweepResult sweep = ws::sweep_tax(fc.sim, fc.tax_grid, exec);
    const std::chrono::duration<double> wall =
        std::chrono::steady_clock::now() - t0;

    const double f_max_mode =
        ws::find_optimal_tax(sweep, ws::OptimalTaxCriterion::MaxMode);
    // The min-slope criterion is undefined when a grid point has too few
    // after-mode CCDF points for a fit (narrow distributions at high f under
    // the poorest policy); reported as nan rather than failing the sweep.
    std::optional<double> f_min_slope;
    try {
        f_min_slope = ws::find_optimal_tax(sweep, ws::OptimalTaxCriterion::MinSlope);
    } catch (const ws::SimulationError& e) {
        std::fprintf(stderr, "note: min-slope criterion unavailable: %s\n",
                     e.what());
    }

    double max_drift = 0.0;
    for (const ws::SweepRow& row : sweep.rows)
        max_drift = std::max(max_drift, row.max_conservation_drift);

    const std::string csv = ws::render_sweep_csv(sweep);

    ws::MetaWriter meta;
    meta.add("command", "sweep");
    echo_config(meta, fc, args);
    {
        std::string grid;
        for (std::size_t k = 0; k < fc.tax_grid.size(); ++k) {
            if (k > 0) grid += ',';
            grid += ws::format_double(fc.tax_grid[k]);
        }
        meta.add("tax_grid", grid);
    }
    meta.add("f_star_max_mode", f_max_mode);
    meta.add("f_star_min_slope", f_min_slope ? *f_min_slope : NAN);
    meta.add("conservation_drift", max_drift);
    meta.add("wall_time_seconds", wall.count());

    write_outputs(fc.output_dir, {{"sweep.csv", &csv},
                                  {"run_meta.txt", &meta.text()}});

    std::printf("f_star_max_mode=%s\n", ws::format_double(f_max_mode).c_str());
    std::printf("f_star_min_slope=%s\n",
                ws::format_double(f_min_slope ? *f_min_slope : NAN).c_str());
    return 0;
}

int cmd_analyze(const std::string& in_dir) {
    const auto pw = ws::read_two_column_csv(in_dir + "/pw.csv", "w_bin_center,density");
    const auto qw = ws::read_two_column_csv(in_dir + "/qw.csv", "w,Q");
    if (pw.empty() || qw.empty())
        throw ws::SimulationError("analyze: empty pw.csv or qw.csv");

    // Mode from the density table, ties toward the lowest bin.
    double modal_w = pw.front().first;
    double best_density = pw.front().second;
    for (const auto& [center, density] : pw) {
        if (density > best_density) {
            best_density = density;
            modal_w = center;
        }
    }

    std::vector<ws::CcdfPoint> points;
    points.reserve(qw.size());
    for (const auto& [w, q] : qw) points.push_back({w, q});
    const ws::EmpiricalCcdf ccdf(std::move(points));

    std::optional<ws::TailFit> lognormal;
    std::optional<ws::TailFit> exponential;
    try {
        lognormal = ws::fit_lognormal_slope(ccdf, modal_w);
    } catch (const ws::InsufficientDataError& e) {
        std::fprintf(stderr, "warning: %s\n", e.what());
    }
    try {
        exponential = ws::fit_exponential(ccdf);
    } catch (const ws::InsufficientDataError& e) {
        std::fprintf(stderr, "warning: %s\n", e.what());
    }

    std::printf("w_m=%s\n", ws::format_double(modal_w).c_str());
    std::printf("lognormal_slope=%s\n",
                ws::format_double(lognormal ? ws::lognormal_plot_slope(*lognormal)
                                            : NAN).c_str());
    std::printf("lognormal_r_squared=%s\n",
                ws::format_double(lognormal ? lognormal->r_squared : NAN).c_str());
    std::printf("exponential_T=%s\n",
                ws::format_double(exponential ? ws::fitted_temperature(*exponential)
                                              : NAN).c_str());
    std::printf("exponential_r_squared=%s\n",
                ws::format_double(exponential ? exponential->r_squared : NAN).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Taxed wealth-exchange Monte Carlo simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string in_dir = ".";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "key=value config file")
            ->required();
        cmd->add_option("--seed", args.seed_override,
                        "override the config file seed");
        cmd->add_option("--out", args.out_override,
                        "override the config file output_dir");
        cmd->add_option("--threads", args.threads,
                        "worker threads (0 = hardware)");
    };

    CLI::App* run_cmd = app.add_subcommand(
        "run", "single tax rate; writes pw.csv, qw.csv, run_meta.txt");
    add_common(run_cmd);
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "tax-rate grid; writes sweep.csv, run_meta.txt");
    add_common(sweep_cmd);
    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "refit observables from an existing pw.csv/qw.csv pair");
    analyze_cmd->add_option("--in", in_dir, "directory holding pw.csv and qw.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(args);
        if (sweep_cmd->parsed()) return cmd_sweep(args);
        return cmd_analyze(in_dir);
    } catch (const ws::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
