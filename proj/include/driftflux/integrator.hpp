#pragma once

#include <functional>

#include "driftflux/grid.hpp"
#include "driftflux/model.hpp"

namespace driftflux {

struct SchemeConfig {
    double cfl = 0.4;        // Courant fraction in (0,1]
    double dt_max = 1.0;     // upper time-step bound
    double pos_floor = 0.1;  // positivity safety fraction in (0,1)
    double t_end = 200.0;
    double solver_tol = 0.0;  // unused; the tridiagonal solve is direct
};

struct StepResult {
    double dt_used = 0.0;       // actual step after any halvings
    int n_halvings = 0;         // positivity-triggered reductions
    double max_residual = 0.0;  // sup of the momentum residual after the solve
    // Dissipation increments of the accepted step, already dt-weighted:
    double d_visc_increment = 0.0;  // dt * sum B c^th Q^(1+th) u_x^2 dx
    double d_fric_increment = 0.0;  // dt * sum h(Q)|u^k| (u^{k+1})^2 dx
};

/// Acoustic time step: min(dt_max, cfl*dx / max_j sqrt(gamma*A*rho_l*c^gamma*Q^(gamma+1))).
double compute_dt(const TransformedState& s, const MassGrid& grid, const ModelParams& p,
                  const SchemeConfig& cfg);

/// Exact solution of Q_t = -rho_l Q^2 u_x with frozen gradient, in the
/// reciprocal form 1/Q_new = 1/Q_old + rho_l*u_x*dt the integrator uses.
double reciprocal_q_update(double q_old, double u_x, double rho_l, double dt);

/// One semi-implicit step: explicit pressure and gravity, linearized-implicit
/// friction, fully implicit viscosity (tridiagonal solve), exact reciprocal
/// Q update, positivity guard with dt halving. Mutates the state in place.
StepResult step(TransformedState& s, const MassGrid& grid, const ModelParams& p,
                const SchemeConfig& cfg, double dt);

/// Called after every accepted step with (t, state, result); must not mutate.
using StepObserver =
    std::function<void(double, const TransformedState&, const StepResult&)>;

/// Advances to cfg.t_end (the last step is clamped to land exactly on it).
/// Returns the number of steps taken.
long run_to_time(TransformedState& s, const MassGrid& grid, const ModelParams& p,
                 const SchemeConfig& cfg, const StepObserver& observer = {});

}  // namespace driftflux
