#include "driftflux/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pow_util.hpp"

namespace driftflux {

using detail::pow_fast;

double relative_potential(double c, double Q, double Q_inf, const ModelParams& p) {
    if (!(p.gamma > 1.0))
        throw std::domain_error("relative_potential: gamma must be > 1");
    if (!(Q > 0.0) || !(Q_inf > 0.0))
        throw std::domain_error("relative_potential: Q and Q_inf must be > 0");
    const double cg = pow_fast(c, p.gamma);
    const double gm1 = p.gamma - 1.0;
    const double term1 = (pow_fast(Q, gm1) - pow_fast(Q_inf, gm1)) / gm1;
    const double term2 = pow_fast(Q_inf, p.gamma) * (1.0 / Q - 1.0 / Q_inf);
    return cg / p.rho_l * (term1 + term2);
}

namespace {

double lp_norm(const std::vector<double>& u, const MassGrid& grid, int power) {
    double s = 0.0;
    for (int j = 0; j <= grid.n_cells; ++j) {
        const double a = std::abs(u[j]);
        double v = a;
        for (int k = 1; k < power; ++k) v *= a;
        s += grid.node_weight(j) * v;
    }
    return std::pow(s, 1.0 / power);
}

}  // namespace

DiagnosticsRecord sample(const TransformedState& s, const MassGrid& grid,
                         const ModelParams& p, const StationaryProfile& profile,
                         const Accumulators& acc, double dt_last) {
    const int n = grid.n_cells;
    DiagnosticsRecord rec;
    rec.t = s.t;
    rec.dt = dt_last;
    rec.d_visc_cum = acc.d_visc;
    rec.d_fric_cum = acc.d_fric;

    // Kinetic energy: node u^2/2 averaged to cells; identical to the weighted
    // node quadrature with dx/2 end weights.
    double ekin = 0.0;
    for (int j = 0; j <= n; ++j)
        ekin += 0.5 * grid.node_weight(j) * s.u[j] * s.u[j];
    rec.e_kin = ekin;

    double epot = 0.0;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    double sup_dist = 0.0, w_l2 = 0.0;
    std::vector<double> theta_dist(n);  // (cQ)^theta - (cQ_inf)^theta
    for (int j = 0; j < n; ++j) {
        const double cq = s.c[j] * s.Q[j];
        const double cq_inf = profile.cq_inf[j];
        epot += relative_potential(s.c[j], s.Q[j], profile.q_inf[j], p) * grid.dx;
        const double y = pow_fast(cq / cq_inf, p.theta);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
        theta_dist[j] = pow_fast(cq, p.theta) - pow_fast(cq_inf, p.theta);
        sup_dist = std::max(sup_dist, std::abs(theta_dist[j]));
        const double d = cq - cq_inf;
        w_l2 += profile.w_density[j] * d * d * grid.dx;
    }
    rec.e_pot = epot;
    rec.y_min = ymin;
    rec.y_max = ymax;
    rec.sup_theta_dist = sup_dist;
    rec.w_l2 = w_l2;

    // Weighted gradient: two-point differences between adjacent cell centers,
    // weight evaluated at the shared node (never at x = 0).
    double w_grad = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        const double dgrad = (theta_dist[j + 1] - theta_dist[j]) / grid.dx;
        w_grad += profile.w_grad[j] * dgrad * dgrad * grid.dx;
    }
    rec.w_grad = w_grad;

    rec.l2_u = lp_norm(s.u, grid, 2);
    rec.l3_u = lp_norm(s.u, grid, 3);
    rec.l4_u = lp_norm(s.u, grid, 4);
    rec.l5_u = lp_norm(s.u, grid, 5);
    double sup_u = 0.0;
    for (int j = 0; j <= n; ++j) sup_u = std::max(sup_u, std::abs(s.u[j]));
    rec.sup_u = sup_u;

    const auto ux = cell_gradient_of_node_field(s.u, grid);
    double sup_qux = 0.0;
    for (int j = 0; j < n; ++j) sup_qux = std::max(sup_qux, std::abs(s.Q[j] * ux[j]));
    rec.sup_qux = sup_qux;

    for (double v : {rec.e_kin, rec.e_pot, rec.y_min, rec.y_max, rec.w_l2, rec.w_grad,
                     rec.sup_theta_dist, rec.sup_u, rec.sup_qux})
        if (!std::isfinite(v)) throw std::runtime_error("sample: non-finite diagnostic");
    return rec;
}

namespace {

// Three-point derivative at the middle time; exact divided-difference form,
// reduces to the centered difference for uniform spacing.
inline double ddt_mid(double f0, double f1, double f2, double h1, double h2) {
    return (h1 * h1 * f2 - h2 * h2 * f0 + (h2 * h2 - h1 * h1) * f1) /
           (h1 * h2 * (h1 + h2));
}

}  // namespace

double flux_identity_residual(const TransformedState& s0, const TransformedState& s1,
                              const TransformedState& s2, const MassGrid& grid,
                              const ModelParams& p, const StationaryProfile& profile) {
    const int n = grid.n_cells;
    const double h1 = s1.t - s0.t;
    const double h2 = s2.t - s1.t;
    if (!(h1 > 0.0) || !(h2 > 0.0))
        throw std::invalid_argument("flux_identity_residual: states must be time-ordered");

    // u_t at nodes, then cumulative integral int_0^x u_t dy to cell centers.
    std::vector<double> ut(n + 1);
    for (int j = 0; j <= n; ++j)
        ut[j] = ddt_mid(s0.u[j], s1.u[j], s2.u[j], h1, h2);

    std::vector<double> int_ut(n);
    double running = 0.0;  // trapezoid up to the left node of the cell
    for (int j = 0; j < n; ++j) {
        // half-cell piece [x_j, x_{j+1/2}], exact for linear u_t
        int_ut[j] = running + 0.5 * grid.dx * (0.75 * ut[j] + 0.25 * ut[j + 1]);
        running += 0.5 * grid.dx * (ut[j] + ut[j + 1]);
    }

    // Friction integrand at cells from the middle state, cumulative midpoint.
    std::vector<double> int_fric(n);
    double run_f = 0.0;
    for (int j = 0; j < n; ++j) {
        const double u_cell = 0.5 * (s1.u[j] + s1.u[j + 1]);
        const double phi = friction_coefficient(s1.Q[j], p) * u_cell * std::abs(u_cell);
        int_fric[j] = run_f + 0.5 * grid.dx * phi;
        run_f += grid.dx * phi;
    }

    double sup = 0.0;
    const double inv_trho = p.B / (p.theta * p.rho_l);
    for (int j = 0; j < n; ++j) {
        const double f0 = pow_fast(s0.c[j] * s0.Q[j], p.theta);
        const double f1 = pow_fast(s1.c[j] * s1.Q[j], p.theta);
        const double f2 = pow_fast(s2.c[j] * s2.Q[j], p.theta);
        const double dtheta_dt = ddt_mid(f0, f1, f2, h1, h2);
        const double cq = s1.c[j] * s1.Q[j];
        const double res = p.A * (pow_fast(cq, p.gamma) -
                                  pow_fast(profile.cq_inf[j], p.gamma)) +
                           inv_trho * dtheta_dt + int_ut[j] + int_fric[j];
        sup = std::max(sup, std::abs(res));
    }
    return sup;
}

DecayFit fit_decay_exponent(std::span<const std::pair<double, double>> series,
                            double t_lo, double t_hi) {
    DecayFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    if (!(t_lo < t_hi)) {
        fit.error = "window must satisfy t_lo < t_hi";
        return fit;
    }
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (!(v > 0.0)) {
            fit.error = "nonpositive value in window";
            return fit;
        }
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(v));
    }
    const size_t m = xs.size();
    if (m < 10) {
        fit.error = "fewer than 10 samples in window";
        return fit;
    }
    double sx = 0, sy = 0;
    for (size_t i = 0; i < m; ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        fit.error = "degenerate time window";
        return fit;
    }
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    if (syy <= 1e-24 * m * std::max(1.0, my * my)) {
        fit.r2 = 1.0;  // constant series: the fit is exact
    } else {
        const double ss_res = syy - sxy * sxy / sxx;
        fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    fit.valid = true;
    return fit;
}

TheoreticalRate theoretical_density_rate(const ModelParams& p) {
    TheoreticalRate r;
    r.exponent = 2.0 * p.theta / (4.0 * p.gamma + p.alpha * p.gamma - 2.0);
    r.strict_regime = validate_params(p).strict_regime;
    return r;
}

}  // namespace driftflux
