#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftflux/grid.hpp"
#include "driftflux/model.hpp"

namespace driftflux {

/// Running time integrals owned by the caller, one set per trajectory.
struct Accumulators {
    double d_visc = 0.0;  // int_0^t int c^th Q^(1+th) u_x^2 dx ds
    double d_fric = 0.0;  // int_0^t int h(Q) u^2 |u| dx ds
};

/// One time-stamped row of every monitored functional.
struct DiagnosticsRecord {
    double t = 0.0;
    double e_kin = 0.0;           // sum u^2/2 dx (cell-averaged nodes)
    double e_pot = 0.0;           // sum Pi dx
    double d_visc_cum = 0.0;      // accumulated viscous dissipation
    double d_fric_cum = 0.0;      // accumulated friction dissipation
    double y_min = 0.0;           // min of ((cQ)/(cQ_inf))^theta
    double y_max = 0.0;           // max of the same ratio
    double l2_u = 0.0, l3_u = 0.0, l4_u = 0.0, l5_u = 0.0;
    double sup_u = 0.0;           // max |u|
    double sup_qux = 0.0;         // max |Q u_x|
    double w_l2 = 0.0;            // sum x^(1-3/g) (cQ - cQ_inf)^2 dx
    double w_grad = 0.0;          // weighted gradient norm of (cQ)^th - (cQ_inf)^th
    double sup_theta_dist = 0.0;  // max |(cQ)^th - (cQ_inf)^th|
    double flux_residual = 0.0;   // filled in by the driver from a 3-state window
    double dt = 0.0;              // step size at sample time
};

/// Energy density relative to the stationary state, closed form of
/// (1/rho_l) int_{Q_inf}^{Q} c^gamma (h^gamma - Q_inf^gamma)/h^2 dh.
/// Nonnegative, zero iff Q == Q_inf.
double relative_potential(double c, double Q, double Q_inf, const ModelParams& p);

/// Evaluates every functional on one state by midpoint quadrature on cells
/// (node velocities averaged to cells where integrals mix u and Q).
DiagnosticsRecord sample(const TransformedState& s, const MassGrid& grid,
                         const ModelParams& p, const StationaryProfile& profile,
                         const Accumulators& acc, double dt_last);

/// Sup over cells of the effective-viscous-flux identity residual
///   (cQ)^g - (cQ_inf)^g + (1/(th*rho_l)) d/dt (cQ)^th
///   + int_0^x u_t dy + int_0^x h(Q)u|u| dy
/// evaluated at the middle of three consecutive states; time derivatives use
/// the exact divided-difference formula, so nonuniform spacing is fine.
double flux_identity_residual(const TransformedState& s0, const TransformedState& s1,
                              const TransformedState& s2, const MassGrid& grid,
                              const ModelParams& p, const StationaryProfile& profile);

struct DecayFit {
    double exponent = 0.0;   // slope of log(value) vs log(1+t)
    double prefactor = 0.0;  // exp(intercept)
    double r2 = 0.0;         // in [0,1]
    double t_lo = 0.0, t_hi = 0.0;
    bool valid = false;
    std::string error;
};

/// OLS power-law fit of a positive series against (1+t) inside [t_lo, t_hi].
/// Needs >= 10 samples in the window, all strictly positive.
DecayFit fit_decay_exponent(std::span<const std::pair<double, double>> series,
                            double t_lo, double t_hi);

struct TheoreticalRate {
    double exponent = 0.0;     // 2*theta/(4*gamma + alpha*gamma - 2)
    bool strict_regime = false;  // no guaranteed rate when theta >= gamma-1
};

TheoreticalRate theoretical_density_rate(const ModelParams& p);

}  // namespace driftflux
