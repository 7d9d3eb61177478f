#include "driftflux/acceptance.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "driftflux/diagnostics.hpp"
#include "driftflux/integrator.hpp"
#include "driftflux/io.hpp"
#include "driftflux/model.hpp"
#include "driftflux/reference.hpp"

namespace driftflux {

namespace {

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void result(int id, const std::string& name, bool pass, const std::string& detail) {
        out << (pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << id << ". " << name;
        if (!detail.empty()) out << "  (" << detail << ")";
        out << "\n";
        out.flush();
        if (!pass) ++failures;
    }

    void run(int id, const std::string& name,
             const std::function<std::pair<bool, std::string>()>& fn) {
        try {
            auto [pass, detail] = fn();
            result(id, name, pass, detail);
        } catch (const std::exception& e) {
            result(id, name, false, std::string("exception: ") + e.what());
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << std::scientific << v;
    return os.str();
}

// Worst positive jump of E_kin + E_pot + D_visc_cum + D_fric_cum between
// consecutive samples, raw and in excess of the per-step slack 10*dt^2*E0.
struct EnergyViolation {
    double worst_raw = 0.0;
    double worst_excess = 0.0;
};

EnergyViolation energy_violation(const SingleRunResult& res) {
    EnergyViolation v;
    const double e0 = res.initial_energy;
    for (size_t k = 1; k < res.records.size(); ++k) {
        const auto& a = res.records[k - 1];
        const auto& b = res.records[k];
        const double ea = a.e_kin + a.e_pot + a.d_visc_cum + a.d_fric_cum;
        const double eb = b.e_kin + b.e_pot + b.d_visc_cum + b.d_fric_cum;
        const double jump = eb - ea;
        if (jump <= 0.0) continue;
        v.worst_raw = std::max(v.worst_raw, jump);
        const double dt = b.dt > 0.0 ? b.dt : 1.0;
        const double n_steps = std::max(1.0, (b.t - a.t) / dt);
        const double slack = 10.0 * dt * dt * e0 * n_steps;
        v.worst_excess = std::max(v.worst_excess, jump - slack);
    }
    return v;
}

std::vector<std::pair<double, double>> series(const SingleRunResult& res,
                                              double DiagnosticsRecord::* field) {
    std::vector<std::pair<double, double>> out;
    out.reserve(res.records.size());
    for (const auto& r : res.records) out.emplace_back(r.t, r.*field);
    return out;
}

// Residual of the effective-viscous-flux identity over the last three
// consecutive integrator steps of a short default-scenario run.
double step_level_flux_residual(int n_cells, double t_end) {
    RunConfig cfg;
    cfg.n_cells = n_cells;
    cfg.scheme.t_end = t_end;
    MassGrid grid(n_cells);
    TransformedState state = build_initial_data(cfg.initial, grid, cfg.params);
    const auto profile = make_stationary_profile(grid, cfg.params, state.c);
    std::deque<TransformedState> window;
    window.push_back(state);
    auto observer = [&](double, const TransformedState& s, const StepResult&) {
        window.push_back(s);
        if (window.size() > 3) window.pop_front();
    };
    run_to_time(state, grid, cfg.params, cfg.scheme, observer);
    return flux_identity_residual(window[0], window[1], window[2], grid, cfg.params,
                                  profile);
}

bool ulp_close(double a, double b, int ulps) {
    const double scale = std::max({std::abs(a), std::abs(b),
                                   std::numeric_limits<double>::min()});
    return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * scale;
}

}  // namespace

int run_acceptance(std::ostream& out) {
    Reporter rep{out};
    out << "acceptance suite (default scenario: gamma=2 theta=0.5 alpha=0 f=1 g=1 "
           "N=400 t_end=200)\n";

    // --- criterion 1: stationary fixed point ------------------------------
    rep.run(1, "stationary fixed point preserved over 1e4 steps", [] {
        RunConfig cfg;
        cfg.initial.profile_kind = ProfileKind::Stationary;
        MassGrid grid(cfg.n_cells);
        TransformedState s = build_initial_data(cfg.initial, grid, cfg.params);
        const auto profile = make_stationary_profile(grid, cfg.params, s.c);
        for (int k = 0; k < 10000; ++k) {
            const double dt = compute_dt(s, grid, cfg.params, cfg.scheme);
            step(s, grid, cfg.params, cfg.scheme, dt);
        }
        double sup_cq = 0.0, sup_u = 0.0;
        for (int j = 0; j < grid.n_cells; ++j)
            sup_cq = std::max(sup_cq, std::abs(s.c[j] * s.Q[j] - profile.cq_inf[j]));
        for (double v : s.u) sup_u = std::max(sup_u, std::abs(v));
        const bool pass = sup_cq <= 1e-10 && sup_u <= 1e-10;
        return std::make_pair(pass, "sup|cQ-cQinf|=" + fmt(sup_cq) +
                                        ", sup|u|=" + fmt(sup_u));
    });

    // --- default scenario trajectory, shared by criteria 2-7 --------------
    RunConfig default_cfg;
    SingleRunResult base_run;
    bool base_ok = true;
    try {
        base_run = run_single(default_cfg);
    } catch (const std::exception& e) {
        base_ok = false;
        out << "default scenario run failed: " << e.what() << "\n";
    }

    rep.run(2, "discrete energy dissipation, violation halves with dt", [&] {
        if (!base_ok) return std::make_pair(false, std::string("no base run"));
        const auto v1 = energy_violation(base_run);
        RunConfig half = default_cfg;
        half.scheme.cfl = default_cfg.scheme.cfl / 2.0;
        const auto v2 = energy_violation(run_single(half));
        const double e0 = base_run.initial_energy;
        const bool mono = v1.worst_excess <= 0.0;
        const bool halves = v2.worst_raw <= std::max(0.5 * v1.worst_raw, 1e-14 * e0);
        return std::make_pair(mono && halves,
                              "worst_excess=" + fmt(v1.worst_excess) +
                                  ", worst_raw=" + fmt(v1.worst_raw) +
                                  ", worst_raw(dt/2)=" + fmt(v2.worst_raw));
    });

    rep.run(3, "uniform Y-band persists along the trajectory", [&] {
        if (!base_ok) return std::make_pair(false, std::string("no base run"));
        const double y_min0 = base_run.records.front().y_min;
        const double y_max0 = base_run.records.front().y_max;
        double worst_min = std::numeric_limits<double>::infinity(), worst_max = 0.0;
        for (const auto& r : base_run.records) {
            worst_min = std::min(worst_min, r.y_min);
            worst_max = std::max(worst_max, r.y_max);
        }
        const bool pass = worst_min >= 0.5 * y_min0 &&
                          worst_max <= 2.0 * std::max(y_max0, 1.0);
        return std::make_pair(pass, "Y in [" + fmt(worst_min) + ", " + fmt(worst_max) +
                                        "], Y0 in [" + fmt(y_min0) + ", " +
                                        fmt(y_max0) + "]");
    });

    rep.run(4, "uniform convergence: 95% contraction of sup norms by t=200", [&] {
        if (!base_ok) return std::make_pair(false, std::string("no base run"));
        const auto& first = base_run.records.front();
        const auto& last = base_run.records.back();
        const bool pass = last.sup_theta_dist <= 0.05 * first.sup_theta_dist &&
                          last.sup_u <= 0.05 * first.sup_u;
        return std::make_pair(pass,
                              "sup_theta_dist " + fmt(first.sup_theta_dist) + " -> " +
                                  fmt(last.sup_theta_dist) + ", sup_u " +
                                  fmt(first.sup_u) + " -> " + fmt(last.sup_u));
    });

    rep.run(5, "velocity decay rate: sup|u| exponent <= -0.45, r2 >= 0.9", [&] {
        if (!base_ok) return std::make_pair(false, std::string("no base run"));
        const auto fit =
            fit_decay_exponent(series(base_run, &DiagnosticsRecord::sup_u), 10.0, 200.0);
        const bool pass = fit.valid && fit.exponent <= -0.45 && fit.r2 >= 0.9;
        return std::make_pair(pass, "exponent=" + fmt(fit.exponent) +
                                        ", r2=" + fmt(fit.r2) +
                                        (fit.valid ? "" : ", " + fit.error));
    });

    rep.run(6, "density decay rate vs theoretical 2*theta/(4g+ag-2)", [&] {
        if (!base_ok) return std::make_pair(false, std::string("no base run"));
        const auto fit = fit_decay_exponent(
            series(base_run, &DiagnosticsRecord::sup_theta_dist), 10.0, 200.0);
        const double rate = theoretical_density_rate(default_cfg.params).exponent;
        const double threshold = -0.9 * rate;  // -0.15 at the default parameters
        const bool pass = fit.valid && fit.exponent <= threshold;
        return std::make_pair(pass, "exponent=" + fmt(fit.exponent) +
                                        ", threshold=" + fmt(threshold) +
                                        ", theory=" + fmt(rate));
    });

    rep.run(7, "weighted decay: w_l2 + l2_u^2 exponent <= -0.9", [&] {
        if (!base_ok) return std::make_pair(false, std::string("no base run"));
        std::vector<std::pair<double, double>> s;
        for (const auto& r : base_run.records)
            s.emplace_back(r.t, r.w_l2 + r.l2_u * r.l2_u);
        const auto fit = fit_decay_exponent(s, 10.0, 200.0);
        const bool pass = fit.valid && fit.exponent <= -0.9;
        return std::make_pair(pass, "exponent=" + fmt(fit.exponent) +
                                        ", r2=" + fmt(fit.r2));
    });

    rep.run(8, "oracle cross-validation and Richardson order", [&] {
        auto short_run = [&](int n) {
            RunConfig cfg;
            cfg.n_cells = n;
            cfg.scheme.t_end = 1.0;
            cfg.sample_interval = 1.0;
            return run_single(cfg);
        };
        const auto s200 = short_run(200);
        const auto s400 = short_run(400);
        const auto s800 = short_run(800);
        auto cq_of = [](const TransformedState& st) {
            std::vector<double> cq(st.Q.size());
            for (size_t j = 0; j < cq.size(); ++j) cq[j] = st.c[j] * st.Q[j];
            return cq;
        };
        const MassGrid g200(200), g400(400);
        const double d1 =
            l2_cell_distance(cq_of(s200.final_state), coarsen_cells(cq_of(s400.final_state)), g200);
        const double d2 =
            l2_cell_distance(cq_of(s400.final_state), coarsen_cells(cq_of(s800.final_state)), g400);
        const double order = richardson_order(d1, d2);

        RunConfig cfg;  // defaults pin the scenario
        const auto expl = explicit_reference_run(cfg.initial, cfg.params, 1600, 1.0);
        const auto cq_expl = coarsen_cells(coarsen_cells(cq_of(expl.state)));
        const double cross = l2_cell_distance(cq_of(s400.final_state), cq_expl, g400);

        const bool pass = cross <= 0.01 && order >= 0.8;
        return std::make_pair(pass, "L2(cQ) semi-implicit vs explicit = " + fmt(cross) +
                                        ", Richardson order = " + fmt(order));
    });

    rep.run(9, "exact reciprocal Q update matches the Riccati solution", [] {
        std::mt19937_64 rng(20240817);
        std::uniform_real_distribution<double> q_dist(0.1, 5.0), ux_dist(-2.0, 2.0),
            dt_dist(1e-4, 0.5), rho_dist(0.5, 2.0);
        int bad = 0;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double q0 = q_dist(rng), rho = rho_dist(rng), dt = dt_dist(rng);
            double ux = ux_dist(rng);
            if (1.0 + rho * q0 * ux * dt <= 0.05) ux = std::abs(ux);  // keep denominator positive
            const double a = reciprocal_q_update(q0, ux, rho, dt);
            const double b = riccati_exact(q0, ux, rho, dt);
            if (!ulp_close(a, b, 4)) ++bad;
            worst = std::max(worst, std::abs(a - b) / b);
            // composition: two half steps vs one full step
            const double half = reciprocal_q_update(
                reciprocal_q_update(q0, ux, rho, dt / 2), ux, rho, dt / 2);
            if (!ulp_close(half, a, 4)) ++bad;
        }
        return std::make_pair(bad == 0, "mismatches=" + std::to_string(bad) +
                                            ", worst rel diff=" + fmt(worst));
    });

    rep.run(10, "relative potential matches 1e4-panel quadrature to 1e-6", [] {
        std::mt19937_64 rng(20240818);
        std::uniform_real_distribution<double> c_dist(0.2, 2.0), q_dist(0.2, 3.0),
            g_dist(1.2, 3.0), rho_dist(0.5, 2.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            ModelParams p;
            p.gamma = g_dist(rng);
            p.rho_l = rho_dist(rng);
            const double c = c_dist(rng), q = q_dist(rng), q_inf = q_dist(rng);
            const double closed = relative_potential(c, q, q_inf, p);
            const double quad = quadrature_oracle(
                [&](double h) {
                    return std::pow(c, p.gamma) *
                           (std::pow(h, p.gamma) - std::pow(q_inf, p.gamma)) /
                           (p.rho_l * h * h);
                },
                q_inf, q, 10000);
            const double denom = std::max(std::abs(quad), 1e-14);
            worst = std::max(worst, std::abs(closed - quad) / denom);
        }
        return std::make_pair(worst <= 1e-6, "worst rel err=" + fmt(worst));
    });

    rep.run(11, "flux identity residual drops >= 1.8x under dx,dt halving", [] {
        const double r1 = step_level_flux_residual(400, 1.0);
        const double r2 = step_level_flux_residual(800, 1.0);
        const double factor = r1 / r2;
        return std::make_pair(factor >= 1.8, "residual " + fmt(r1) + " -> " + fmt(r2) +
                                                 ", factor=" + fmt(factor));
    });

    rep.run(12, "validator flags each regime constraint by name", [] {
        ModelParams p;
        bool ok = true;
        p.gamma = 1.0;
        ok &= validate_params(p).has(ConstraintCode::GAMMA_NOT_GT_ONE);
        p = ModelParams{};
        p.gamma = 1.5;
        p.theta = 0.9;  // 0.9 > gamma/2 = 0.75
        ok &= validate_params(p).has(ConstraintCode::THETA_GT_GAMMA_OVER_2);
        p = ModelParams{};
        p.theta = 1.5;  // 1.5 > gamma - 1 = 1
        ok &= validate_params(p).has(ConstraintCode::THETA_GT_GAMMA_MINUS_1);
        p = ModelParams{};
        p.alpha = 0.3;  // theta = 0.5 > 1 - alpha*gamma = 0.4
        ok &= validate_params(p).has(ConstraintCode::THETA_GT_ONE_MINUS_ALPHA_GAMMA);
        return std::make_pair(ok, std::string(ok ? "all four codes hit" : "missing code"));
    });

    out << (rep.failures == 0 ? "all criteria passed\n"
                              : std::to_string(rep.failures) + " criteria failed\n");
    return rep.failures;
}

}  // namespace driftflux
