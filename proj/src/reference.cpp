#include "driftflux/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pow_util.hpp"

namespace driftflux {

using detail::pow_fast;

namespace {

double explicit_dt(const std::vector<double>& visc, const std::vector<double>& c,
                   const std::vector<double>& q, const ModelParams& p, double dx) {
    double max_visc = 0.0, max_speed2 = 0.0;
    const int n = static_cast<int>(q.size());
    for (int j = 0; j < n; ++j) {
        max_visc = std::max(max_visc, visc[j]);
        const double s2 = p.gamma * p.A * p.rho_l * pow_fast(c[j], p.gamma) *
                          pow_fast(q[j], p.gamma + 1.0);
        max_speed2 = std::max(max_speed2, s2);
    }
    double dt = 1.0;
    if (max_visc > 0.0) dt = std::min(dt, 0.9 * dx * dx / (2.0 * max_visc));
    if (max_speed2 > 0.0) dt = std::min(dt, 0.4 * dx / std::sqrt(max_speed2));
    return dt;
}

}  // namespace

ExplicitRunResult explicit_reference_run(const InitialDataSpec& spec,
                                         const ModelParams& p, int n_cells,
                                         double t_end, long max_steps) {
    MassGrid grid(n_cells);
    TransformedState s = build_initial_data(spec, grid, p);
    const int n = n_cells;
    const double dx = grid.dx;
    const double inv_dx = 1.0 / dx;

    std::vector<double> visc(n), pressure(n), sigma(n), ux(n), u_new(n + 1);

    // Budget pre-check from the initial diffusive restriction.
    for (int j = 0; j < n; ++j)
        visc[j] = p.B * pow_fast(s.c[j], p.theta) * pow_fast(s.Q[j], 1.0 + p.theta);
    {
        const double dt0 = explicit_dt(visc, s.c, s.Q, p, dx);
        const double est = t_end / dt0;
        if (est > static_cast<double>(max_steps)) {
            std::ostringstream os;
            os << "explicit_reference_run: would need about " << est
               << " steps, budget is " << max_steps;
            throw std::runtime_error(os.str());
        }
    }

    long steps = 0;
    while (s.t < t_end) {
        for (int j = 0; j < n; ++j) {
            ux[j] = (s.u[j + 1] - s.u[j]) * inv_dx;
            const double cq = s.c[j] * s.Q[j];
            pressure[j] = p.A * pow_fast(cq, p.gamma);
            visc[j] = p.B * pow_fast(s.c[j], p.theta) * pow_fast(s.Q[j], 1.0 + p.theta);
            sigma[j] = pressure[j] - visc[j] * ux[j];
        }

        double dt = explicit_dt(visc, s.c, s.Q, p, dx);
        if (s.t + dt > t_end) dt = t_end - s.t;
        if (++steps > max_steps)
            throw std::runtime_error("explicit_reference_run: step budget exceeded");

        // Momentum, forward Euler; same vacuum boundary as the main solver
        // (zero total stress at x = 0, half spacing at node 0).
        {
            const double fr = friction_coefficient(s.Q[0], p) * s.u[0] * std::abs(s.u[0]);
            u_new[0] = s.u[0] + dt * (-(sigma[0] - 0.0) * 2.0 * inv_dx + p.g - fr);
        }
        for (int j = 1; j < n; ++j) {
            const double q_node = 0.5 * (s.Q[j - 1] + s.Q[j]);
            const double fr = friction_coefficient(q_node, p) * s.u[j] * std::abs(s.u[j]);
            u_new[j] = s.u[j] + dt * (-(sigma[j] - sigma[j - 1]) * inv_dx + p.g - fr);
        }
        u_new[n] = 0.0;

        // Mass, forward Euler with the old gradient.
        for (int j = 0; j < n; ++j) {
            s.Q[j] -= dt * p.rho_l * s.Q[j] * s.Q[j] * ux[j];
            if (!(s.Q[j] > 0.0))
                throw std::runtime_error("explicit_reference_run: Q positivity lost");
        }
        s.u.swap(u_new);
        s.t += dt;
    }
    return {std::move(s), steps};
}

double riccati_exact(double q0, double u_x, double rho_l, double t) {
    const long double denom =
        1.0L + static_cast<long double>(rho_l) * q0 * u_x * t;
    if (!(denom > 0.0L)) {
        std::ostringstream os;
        os << "riccati_exact: finite-time degeneracy, denominator = "
           << static_cast<double>(denom);
        throw std::domain_error(os.str());
    }
    return static_cast<double>(q0 / denom);
}

double quadrature_oracle(const std::function<double(double)>& f, double a, double b,
                         int panels) {
    if (panels < 2) throw std::invalid_argument("quadrature_oracle: panels must be >= 2");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("quadrature_oracle: bounds must be finite");
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

std::vector<double> coarsen_cells(const std::vector<double>& fine) {
    if (fine.size() % 2 != 0)
        throw std::invalid_argument("coarsen_cells: need an even cell count");
    std::vector<double> out(fine.size() / 2);
    for (size_t j = 0; j < out.size(); ++j)
        out[j] = 0.5 * (fine[2 * j] + fine[2 * j + 1]);
    return out;
}

double l2_cell_distance(const std::vector<double>& a, const std::vector<double>& b,
                        const MassGrid& grid) {
    if (a.size() != b.size() || static_cast<int>(a.size()) != grid.n_cells)
        throw std::invalid_argument("l2_cell_distance: size mismatch");
    double s = 0.0;
    for (size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return std::sqrt(s * grid.dx);
}

double richardson_order(double d_coarse, double d_fine) {
    if (!(d_coarse > 0.0) || !(d_fine > 0.0))
        throw std::domain_error("richardson_order: distances must be > 0");
    return std::log2(d_coarse / d_fine);
}

}  // namespace driftflux
