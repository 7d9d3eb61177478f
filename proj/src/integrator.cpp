#include "driftflux/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pow_util.hpp"

namespace driftflux {

using detail::pow_fast;

double compute_dt(const TransformedState& s, const MassGrid& grid, const ModelParams& p,
                  const SchemeConfig& cfg) {
    double max_speed = 0.0;
    for (int j = 0; j < grid.n_cells; ++j) {
        if (!std::isfinite(s.Q[j]) || !std::isfinite(s.c[j]))
            throw std::runtime_error("compute_dt: non-finite state");
        const double speed2 = p.gamma * p.A * p.rho_l * pow_fast(s.c[j], p.gamma) *
                              pow_fast(s.Q[j], p.gamma + 1.0);
        if (speed2 > max_speed) max_speed = speed2;
    }
    if (max_speed <= 0.0) return cfg.dt_max;
    const double dt = cfg.cfl * grid.dx / std::sqrt(max_speed);
    return std::min(cfg.dt_max, dt);
}

double reciprocal_q_update(double q_old, double u_x, double rho_l, double dt) {
    const long double r =
        static_cast<long double>(rho_l) * q_old * u_x * dt;
    if (r == 0.0L) return q_old;  // exact: frozen gradient zero means Q constant
    return static_cast<double>(q_old / (1.0L + r));
}

namespace {

// Thomas algorithm; overwrites the scratch vectors. Diagonal dominance is
// guaranteed by the assembly (friction folds into the diagonal).
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs,
                       std::vector<double>& x) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0)
            throw std::runtime_error("step: degenerate tridiagonal diagonal");
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0)
        throw std::runtime_error("step: degenerate tridiagonal diagonal");
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
}

}  // namespace

StepResult step(TransformedState& s, const MassGrid& grid, const ModelParams& p,
                const SchemeConfig& cfg, double dt) {
    const int n = grid.n_cells;
    const double dx = grid.dx;
    const double inv_dx = 1.0 / dx;

    // Frozen-in-time cell coefficients (old Q throughout the solve).
    std::vector<double> pressure(n), visc(n);
    for (int j = 0; j < n; ++j) {
        const double cq = s.c[j] * s.Q[j];
        pressure[j] = p.A * pow_fast(cq, p.gamma);
        visc[j] = p.B * pow_fast(s.c[j], p.theta) * pow_fast(s.Q[j], 1.0 + p.theta);
    }

    // Friction coefficient h(Q)|u^k| at nodes; Q averaged to nodes.
    std::vector<double> fric(n);
    fric[0] = friction_coefficient(s.Q[0], p) * std::abs(s.u[0]);
    for (int j = 1; j < n; ++j) {
        const double q_node = 0.5 * (s.Q[j - 1] + s.Q[j]);
        fric[j] = friction_coefficient(q_node, p) * std::abs(s.u[j]);
    }

    std::vector<double> lower(n), diag(n), upper(n), rhs(n), u_star(n);
    std::vector<double> lo(n), di(n), up(n), rh(n);

    StepResult result;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 40) {
            std::ostringstream os;
            os << "step: positivity guard exceeded 40 halvings at t = " << s.t
               << " (blow-up signal), dt = " << dt;
            throw std::runtime_error(os.str());
        }

        const double lam = dt * inv_dx * inv_dx;
        // Vacuum node: half control volume, total stress prescribed 0 at x=0,
        // so both the pressure and the viscous flux difference use 2/dx.
        diag[0] = 1.0 + 2.0 * lam * visc[0] + dt * fric[0];
        upper[0] = -2.0 * lam * visc[0];
        lower[0] = 0.0;
        rhs[0] = s.u[0] + dt * (-2.0 * inv_dx * pressure[0] + p.g);
        for (int j = 1; j < n; ++j) {
            lower[j] = -lam * visc[j - 1];
            upper[j] = -lam * visc[j];  // couples to u[n] = 0 when j = n-1
            diag[j] = 1.0 + lam * (visc[j - 1] + visc[j]) + dt * fric[j];
            rhs[j] = s.u[j] + dt * (-(pressure[j] - pressure[j - 1]) * inv_dx + p.g);
        }

        lo = lower; di = diag; up = upper; rh = rhs;
        solve_tridiagonal(lo, di, up, rh, u_star);

        // Positivity guard on the exact reciprocal update denominator.
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            const double u_right = (j + 1 < n) ? u_star[j + 1] : 0.0;
            const double ux = (u_right - u_star[j]) * inv_dx;
            if (1.0 + p.rho_l * s.Q[j] * ux * dt < cfg.pos_floor) {
                ok = false;
                break;
            }
        }
        if (ok) break;
        dt *= 0.5;
        ++result.n_halvings;
    }

    // Residual of the assembled linear system, reported in momentum units.
    double max_res = 0.0;
    for (int j = 0; j < n; ++j) {
        double r = diag[j] * u_star[j] - rhs[j];
        if (j > 0) r += lower[j] * u_star[j - 1];
        if (j + 1 < n) r += upper[j] * u_star[j + 1];
        max_res = std::max(max_res, std::abs(r) / dt);
    }
    result.max_residual = max_res;

    // Dissipation increments of the accepted step.
    double d_visc = 0.0, d_fric = 0.0;
    d_fric += grid.node_weight(0) * fric[0] * u_star[0] * u_star[0];
    for (int j = 1; j < n; ++j)
        d_fric += grid.node_weight(j) * fric[j] * u_star[j] * u_star[j];

    // Exact per-cell reciprocal Q update with the new gradient.
    for (int j = 0; j < n; ++j) {
        const double u_right = (j + 1 < n) ? u_star[j + 1] : 0.0;
        const double ux = (u_right - u_star[j]) * inv_dx;
        d_visc += visc[j] * ux * ux * dx;
        s.Q[j] = reciprocal_q_update(s.Q[j], ux, p.rho_l, dt);
        if (!(s.Q[j] > 0.0))
            throw std::runtime_error("step: Q positivity lost despite guard");
    }
    result.d_visc_increment = dt * d_visc;
    result.d_fric_increment = dt * d_fric;

    for (int j = 0; j < n; ++j) s.u[j] = u_star[j];
    s.u[n] = 0.0;
    s.t += dt;
    result.dt_used = dt;
    return result;
}

long run_to_time(TransformedState& s, const MassGrid& grid, const ModelParams& p,
                 const SchemeConfig& cfg, const StepObserver& observer) {
    if (cfg.t_end < 0.0) throw std::invalid_argument("run_to_time: t_end must be >= 0");
    long n_steps = 0;
    const double t_end = cfg.t_end;
    while (s.t < t_end) {
        double dt = compute_dt(s, grid, p, cfg);
        if (s.t + dt > t_end) dt = t_end - s.t;
        StepResult r;
        try {
            r = step(s, grid, p, cfg, dt);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << e.what() << " (run_to_time aborted at t = " << s.t << ")";
            throw std::runtime_error(os.str());
        }
        ++n_steps;
        if (observer) observer(s.t, s, r);
    }
    return n_steps;
}

}  // namespace driftflux
