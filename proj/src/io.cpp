#include "driftflux/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace driftflux {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line_no) {
    size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line_no) + ": not a number: " + v);
    }
    if (pos != v.size())
        throw ConfigError("line " + std::to_string(line_no) + ": trailing junk in: " + v);
    return d;
}

int parse_int(const std::string& v, int line_no) {
    const double d = parse_double(v, line_no);
    if (d != std::floor(d))
        throw ConfigError("line " + std::to_string(line_no) + ": expected integer: " + v);
    return static_cast<int>(d);
}

bool parse_bool(const std::string& v, int line_no) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("line " + std::to_string(line_no) + ": expected true/false: " + v);
}

std::vector<double> parse_list(const std::string& v, int line_no) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line_no));
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, bool force_out_of_regime) {
    RunConfig cfg;
    cfg.force_out_of_regime = force_out_of_regime;

    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected `key = value`, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

        auto& p = cfg.params;
        if (key == "gamma") p.gamma = parse_double(val, line_no);
        else if (key == "theta") p.theta = parse_double(val, line_no);
        else if (key == "alpha") p.alpha = parse_double(val, line_no);
        else if (key == "rho_l") p.rho_l = parse_double(val, line_no);
        else if (key == "A") p.A = parse_double(val, line_no);
        else if (key == "B") p.B = parse_double(val, line_no);
        else if (key == "f") p.f = parse_double(val, line_no);
        else if (key == "g") p.g = parse_double(val, line_no);
        else if (key == "n_cells") cfg.n_cells = parse_int(val, line_no);
        else if (key == "t_end") cfg.scheme.t_end = parse_double(val, line_no);
        else if (key == "cfl") cfg.scheme.cfl = parse_double(val, line_no);
        else if (key == "dt_max") cfg.scheme.dt_max = parse_double(val, line_no);
        else if (key == "pos_floor") cfg.scheme.pos_floor = parse_double(val, line_no);
        else if (key == "sample_interval") cfg.sample_interval = parse_double(val, line_no);
        else if (key == "u_amp") cfg.initial.u_amp = parse_double(val, line_no);
        else if (key == "kappa_lo") cfg.initial.kappa_lo = parse_double(val, line_no);
        else if (key == "kappa_hi") cfg.initial.kappa_hi = parse_double(val, line_no);
        else if (key == "c_amp") cfg.initial.c_amp = parse_double(val, line_no);
        else if (key == "perturb_wavenumber")
            cfg.initial.perturb_wavenumber = parse_int(val, line_no);
        else if (key == "profile_kind") {
            if (val == "perturbed") cfg.initial.profile_kind = ProfileKind::PerturbedPowerLaw;
            else if (val == "stationary") cfg.initial.profile_kind = ProfileKind::Stationary;
            else
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": profile_kind must be perturbed|stationary");
        } else if (key == "mode") {
            if (val == "single") cfg.mode = RunMode::Single;
            else if (val == "sweep") cfg.mode = RunMode::Sweep;
            else if (val == "verify") cfg.mode = RunMode::Verify;
            else
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": mode must be single|sweep|verify");
        } else if (key == "force_out_of_regime")
            cfg.force_out_of_regime = cfg.force_out_of_regime || parse_bool(val, line_no);
        else if (key == "output_dir") cfg.output_dir = val;
        else if (key == "sweep_gamma") cfg.sweep_gamma = parse_list(val, line_no);
        else if (key == "sweep_theta") cfg.sweep_theta = parse_list(val, line_no);
        else if (key == "sweep_alpha") cfg.sweep_alpha = parse_list(val, line_no);
        else if (key == "sweep_f") cfg.sweep_f = parse_list(val, line_no);
        else if (key == "max_parallel") cfg.max_parallel = parse_int(val, line_no);
        else
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key: " + key);
    }

    if (!(cfg.sample_interval > 0.0))
        throw ConfigError("sample_interval must be > 0");
    if (cfg.n_cells < 8) throw ConfigError("n_cells must be >= 8");

    const auto report = validate_params(cfg.params);
    if (!report.ok())
        throw ConfigError("invalid parameters: " + report.describe());
    if (!report.regime_violations.empty() && !cfg.force_out_of_regime)
        throw ConfigError("outside the admissible regime: " + report.describe() +
                          " (pass --force-out-of-regime to run anyway)");
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << std::setprecision(17);
    const auto& p = cfg.params;
    os << "gamma = " << p.gamma << "\n"
       << "theta = " << p.theta << "\n"
       << "alpha = " << p.alpha << "\n"
       << "rho_l = " << p.rho_l << "\n"
       << "A = " << p.A << "\n"
       << "B = " << p.B << "\n"
       << "f = " << p.f << "\n"
       << "g = " << p.g << "\n"
       << "n_cells = " << cfg.n_cells << "\n"
       << "t_end = " << cfg.scheme.t_end << "\n"
       << "cfl = " << cfg.scheme.cfl << "\n"
       << "dt_max = " << cfg.scheme.dt_max << "\n"
       << "pos_floor = " << cfg.scheme.pos_floor << "\n"
       << "sample_interval = " << cfg.sample_interval << "\n"
       << "u_amp = " << cfg.initial.u_amp << "\n"
       << "kappa_lo = " << cfg.initial.kappa_lo << "\n"
       << "kappa_hi = " << cfg.initial.kappa_hi << "\n"
       << "c_amp = " << cfg.initial.c_amp << "\n"
       << "perturb_wavenumber = " << cfg.initial.perturb_wavenumber << "\n"
       << "profile_kind = "
       << (cfg.initial.profile_kind == ProfileKind::Stationary ? "stationary"
                                                               : "perturbed")
       << "\n"
       << "mode = "
       << (cfg.mode == RunMode::Single ? "single"
                                       : cfg.mode == RunMode::Sweep ? "sweep" : "verify")
       << "\n"
       << "force_out_of_regime = " << (cfg.force_out_of_regime ? "true" : "false") << "\n"
       << "output_dir = " << cfg.output_dir << "\n"
       << "max_parallel = " << cfg.max_parallel << "\n";
    auto list = [&os](const char* key, const std::vector<double>& v) {
        if (v.empty()) return;
        os << key << " = ";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "\n";
    };
    list("sweep_gamma", cfg.sweep_gamma);
    list("sweep_theta", cfg.sweep_theta);
    list("sweep_alpha", cfg.sweep_alpha);
    list("sweep_f", cfg.sweep_f);
    return os.str();
}

SingleRunResult run_single(const RunConfig& cfg) {
    MassGrid grid(cfg.n_cells);
    TransformedState state = build_initial_data(cfg.initial, grid, cfg.params);
    const StationaryProfile profile = make_stationary_profile(grid, cfg.params, state.c);

    SingleRunResult out;
    Accumulators acc;
    out.records.push_back(sample(state, grid, cfg.params, profile, acc, 0.0));
    out.initial_energy = out.records.front().e_kin + out.records.front().e_pot;

    std::deque<TransformedState> window;  // states at sample times, last 3
    window.push_back(state);

    double next_sample = cfg.sample_interval;
    auto observer = [&](double t, const TransformedState& s, const StepResult& r) {
        acc.d_visc += r.d_visc_increment;
        acc.d_fric += r.d_fric_increment;
        if (t + 1e-12 >= next_sample || t >= cfg.scheme.t_end) {
            out.records.push_back(sample(s, grid, cfg.params, profile, acc, r.dt_used));
            window.push_back(s);
            if (window.size() > 3) window.pop_front();
            if (window.size() == 3) {
                const size_t mid = out.records.size() - 2;
                out.records[mid].flux_residual = flux_identity_residual(
                    window[0], window[1], window[2], grid, cfg.params, profile);
            }
            while (next_sample <= t + 1e-12) next_sample += cfg.sample_interval;
        }
    };

    out.n_steps = run_to_time(state, grid, cfg.params, cfg.scheme, observer);
    out.final_state = std::move(state);
    return out;
}

void emit_timeseries(const std::vector<DiagnosticsRecord>& records, std::ostream& out) {
    out << "t,E_kin,E_pot,D_visc_cum,D_fric_cum,Y_min,Y_max,l2_u,l3_u,l4_u,l5_u,"
           "sup_u,sup_Qux,w_l2,w_grad,sup_theta_dist,flux_residual,dt\n";
    out << std::setprecision(17);
    for (const auto& r : records) {
        out << r.t << ',' << r.e_kin << ',' << r.e_pot << ',' << r.d_visc_cum << ','
            << r.d_fric_cum << ',' << r.y_min << ',' << r.y_max << ',' << r.l2_u << ','
            << r.l3_u << ',' << r.l4_u << ',' << r.l5_u << ',' << r.sup_u << ','
            << r.sup_qux << ',' << r.w_l2 << ',' << r.w_grad << ',' << r.sup_theta_dist
            << ',' << r.flux_residual << ',' << r.dt << '\n';
    }
}

void emit_timeseries_file(const std::vector<DiagnosticsRecord>& records,
                          const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write timeseries to " + path);
    emit_timeseries(records, f);
    if (!f) throw std::runtime_error("write failed for " + path);
}

void emit_snapshot(const TransformedState& s, const StationaryProfile& profile,
                   const MassGrid& grid, std::ostream& out) {
    out << "x_center,c,Q,cQ,cQ_inf,u_cell_avg\n";
    out << std::setprecision(17);
    for (int j = 0; j < grid.n_cells; ++j) {
        const double u_avg = 0.5 * (s.u[j] + s.u[j + 1]);
        out << grid.centers[j] << ',' << s.c[j] << ',' << s.Q[j] << ','
            << s.c[j] * s.Q[j] << ',' << profile.cq_inf[j] << ',' << u_avg << '\n';
    }
}

void emit_snapshot_file(const TransformedState& s, const StationaryProfile& profile,
                        const MassGrid& grid, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write snapshot to " + path);
    emit_snapshot(s, profile, grid, f);
    if (!f) throw std::runtime_error("write failed for " + path);
}

std::vector<SweepRow> run_sweep(const RunConfig& base) {
    auto axis = [](const std::vector<double>& v, double fallback) {
        return v.empty() ? std::vector<double>{fallback} : v;
    };
    const auto gammas = axis(base.sweep_gamma, base.params.gamma);
    const auto thetas = axis(base.sweep_theta, base.params.theta);
    const auto alphas = axis(base.sweep_alpha, base.params.alpha);
    const auto fs = axis(base.sweep_f, base.params.f);

    const size_t total = gammas.size() * thetas.size() * alphas.size() * fs.size();
    if (total > 256)
        throw ConfigError("sweep cross-product exceeds the budget of 256 runs");

    std::vector<RunConfig> configs;
    configs.reserve(total);
    for (double ga : gammas)
        for (double th : thetas)
            for (double al : alphas)
                for (double fr : fs) {
                    RunConfig c = base;
                    c.params.gamma = ga;
                    c.params.theta = th;
                    c.params.alpha = al;
                    c.params.f = fr;
                    configs.push_back(c);
                }
    std::sort(configs.begin(), configs.end(), [](const RunConfig& a, const RunConfig& b) {
        return std::tie(a.params.gamma, a.params.theta, a.params.alpha, a.params.f) <
               std::tie(b.params.gamma, b.params.theta, b.params.alpha, b.params.f);
    });

    std::vector<SweepRow> rows(configs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            const RunConfig& c = configs[i];
            SweepRow& row = rows[i];
            row.gamma = c.params.gamma;
            row.theta = c.params.theta;
            row.alpha = c.params.alpha;
            row.f = c.params.f;
            const auto report = validate_params(c.params);
            if (!report.ok() ||
                (!report.regime_violations.empty() && !c.force_out_of_regime)) {
                row.status = "rejected: " + report.describe();
                continue;
            }
            try {
                row.theory = theoretical_density_rate(c.params);
                const auto res = run_single(c);
                std::vector<std::pair<double, double>> su, sd;
                su.reserve(res.records.size());
                sd.reserve(res.records.size());
                for (const auto& r : res.records) {
                    su.emplace_back(r.t, r.sup_u);
                    sd.emplace_back(r.t, r.sup_theta_dist);
                }
                const double t_lo = c.scheme.t_end / 20.0;
                row.u_fit = fit_decay_exponent(su, t_lo, c.scheme.t_end);
                row.density_fit = fit_decay_exponent(sd, t_lo, c.scheme.t_end);
                row.u_pass = row.u_fit.valid && row.u_fit.exponent <= -0.45;
                row.density_pass = row.density_fit.valid &&
                                   row.density_fit.exponent <= -0.9 * row.theory.exponent;
                row.status = "ok";
            } catch (const std::exception& e) {
                row.status = std::string("failed: ") + e.what();
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(base.max_parallel, static_cast<int>(configs.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return rows;
}

void emit_sweep_summary(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "gamma,theta,alpha,f,u_exponent,u_r2,density_exponent,density_r2,"
           "theory_density_rate,strict_regime,u_pass,density_pass,status\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.gamma << ',' << r.theta << ',' << r.alpha << ',' << r.f << ','
            << r.u_fit.exponent << ',' << r.u_fit.r2 << ',' << r.density_fit.exponent
            << ',' << r.density_fit.r2 << ',' << r.theory.exponent << ','
            << (r.theory.strict_regime ? 1 : 0) << ',' << (r.u_pass ? 1 : 0) << ','
            << (r.density_pass ? 1 : 0) << ',' << r.status << '\n';
    }
}

}  // namespace driftflux
