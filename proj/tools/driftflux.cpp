// Command-line driver: single runs, parameter sweeps, and the verification
// suite for the 1D Lagrangian gas-liquid drift-flux laboratory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "driftflux/acceptance.hpp"
#include "driftflux/io.hpp"

namespace fs = std::filesystem;
using namespace driftflux;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int do_run(const std::string& config_path, bool force, const std::string& output_dir) {
    RunConfig cfg = parse_config(config_path.empty() ? "" : read_file(config_path), force);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    fs::create_directories(cfg.output_dir);

    const auto res = run_single(cfg);
    MassGrid grid(cfg.n_cells);
    const auto profile =
        make_stationary_profile(grid, cfg.params, res.final_state.c);

    const auto dir = fs::path(cfg.output_dir);
    emit_timeseries_file(res.records, (dir / "timeseries.csv").string());
    emit_snapshot_file(res.final_state, profile, grid, (dir / "snapshot_final.csv").string());

    const double t_lo = cfg.scheme.t_end / 20.0;
    std::vector<std::pair<double, double>> su, sd;
    for (const auto& r : res.records) {
        su.emplace_back(r.t, r.sup_u);
        sd.emplace_back(r.t, r.sup_theta_dist);
    }
    const auto u_fit = fit_decay_exponent(su, t_lo, cfg.scheme.t_end);
    const auto d_fit = fit_decay_exponent(sd, t_lo, cfg.scheme.t_end);
    const auto theory = theoretical_density_rate(cfg.params);

    std::cout << "steps: " << res.n_steps << ", samples: " << res.records.size() << "\n";
    if (u_fit.valid)
        std::cout << "sup|u| decay exponent: " << u_fit.exponent << " (r2 " << u_fit.r2
                  << ")\n";
    if (d_fit.valid)
        std::cout << "density decay exponent: " << d_fit.exponent << " (r2 " << d_fit.r2
                  << "), theory rate " << theory.exponent
                  << (theory.strict_regime ? "" : " [outside strict regime]") << "\n";
    std::cout << "wrote " << (dir / "timeseries.csv").string() << " and "
              << (dir / "snapshot_final.csv").string() << "\n";
    return 0;
}

int do_sweep(const std::string& config_path, bool force, const std::string& output_dir) {
    RunConfig cfg = parse_config(read_file(config_path), force);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    fs::create_directories(cfg.output_dir);

    const auto rows = run_sweep(cfg);
    const auto path = fs::path(cfg.output_dir) / "sweep_summary.csv";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    emit_sweep_summary(rows, f);
    emit_sweep_summary(rows, std::cout);
    std::cout << "wrote " << path.string() << "\n";
    for (const auto& r : rows)
        if (r.status != "ok" && r.status.rfind("rejected", 0) != 0) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Lagrangian gas-liquid drift-flux laboratory"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    bool force = false;
    app.add_flag("--force-out-of-regime", force,
                 "run configurations outside the admissible parameter window");
    app.add_option("--output-dir", output_dir, "directory for CSV outputs");

    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("config", config_path, "config file (key = value lines)");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("config", config_path, "config file with sweep_* axes")
        ->required();

    app.add_subcommand("verify", "run the full oracle and acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("run")) return do_run(config_path, force, output_dir);
        if (app.got_subcommand("sweep")) return do_sweep(config_path, force, output_dir);
        // verify
        const int failures = run_acceptance(std::cout);
        return failures == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
