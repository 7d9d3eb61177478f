#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftflux/diagnostics.hpp"
#include "driftflux/integrator.hpp"
#include "driftflux/model.hpp"

namespace driftflux {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class RunMode { Single, Sweep, Verify };

struct RunConfig {
    ModelParams params;
    InitialDataSpec initial;
    SchemeConfig scheme;
    int n_cells = 400;
    double sample_interval = 0.5;
    RunMode mode = RunMode::Single;
    bool force_out_of_regime = false;
    std::string output_dir = ".";
    // Sweep axes (empty = not swept) and worker cap.
    std::vector<double> sweep_gamma, sweep_theta, sweep_alpha, sweep_f;
    int max_parallel = 4;
};

/// Parses line-oriented `key = value` text with `#` comments. Unknown keys are
/// rejected by name, malformed lines by line number. Regime violations are
/// rejected unless force_out_of_regime is set (in the text or by the caller).
RunConfig parse_config(const std::string& text, bool force_out_of_regime = false);

/// Canonical `key = value` rendering; parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

/// One simulated trajectory with its sampled diagnostics.
struct SingleRunResult {
    std::vector<DiagnosticsRecord> records;
    TransformedState final_state;
    long n_steps = 0;
    double initial_energy = 0.0;  // E_kin + E_pot at t=0
};

/// Runs one configuration: builds grid/profile/initial data, integrates to
/// t_end sampling every sample_interval, accumulates dissipation integrals
/// per step, and fills the flux_residual column from a rolling 3-sample
/// window.
SingleRunResult run_single(const RunConfig& cfg);

void emit_timeseries(const std::vector<DiagnosticsRecord>& records, std::ostream& out);
void emit_timeseries_file(const std::vector<DiagnosticsRecord>& records,
                          const std::string& path);

void emit_snapshot(const TransformedState& s, const StationaryProfile& profile,
                   const MassGrid& grid, std::ostream& out);
void emit_snapshot_file(const TransformedState& s, const StationaryProfile& profile,
                        const MassGrid& grid, const std::string& path);

struct SweepRow {
    double gamma, theta, alpha, f;
    DecayFit u_fit;
    DecayFit density_fit;
    TheoreticalRate theory;
    bool u_pass = false;        // u exponent <= -0.45
    bool density_pass = false;  // density exponent <= -0.9 * theory
    std::string status;         // "ok" or the failure reason
};

/// Cross-product sweep over the listed axes; runs execute concurrently up to
/// max_parallel, output rows sorted by (gamma, theta, alpha, f) regardless of
/// schedule. Individual failures are recorded in their row; the sweep goes on.
std::vector<SweepRow> run_sweep(const RunConfig& base);

void emit_sweep_summary(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace driftflux
