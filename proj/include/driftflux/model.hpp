#pragma once

#include <string>
#include <utility>
#include <vector>

#include "driftflux/grid.hpp"

namespace driftflux {

/// Physical and exponent parameters of the gas-liquid drift-flux model in
/// Lagrangian mass coordinates. Pressure is A*(cQ)^gamma, viscosity
/// B*c^theta*Q^(1+theta), friction -h(Q)*u*|u| with h(Q) = f*rho_l^2*Q^2/(1+Q)^2.
struct ModelParams {
    double gamma = 2.0;   // pressure exponent, > 1
    double theta = 0.5;   // viscosity exponent, > 0
    double alpha = 0.0;   // vacuum-profile exponent of c0, in [0, 1/gamma)
    double rho_l = 1.0;   // liquid density, > 0
    double A = 1.0;       // pressure constant, > 0
    double B = 1.0;       // viscosity constant, > 0
    double f = 1.0;       // friction coefficient, >= 0
    double g = 1.0;       // gravity, > 0
};

enum class ConstraintCode {
    NON_FINITE_PARAM,
    GAMMA_NOT_GT_ONE,
    THETA_NOT_POSITIVE,
    ALPHA_OUT_OF_RANGE,
    RHO_L_NOT_POSITIVE,
    A_NOT_POSITIVE,
    B_NOT_POSITIVE,
    F_NEGATIVE,
    G_NOT_POSITIVE,
    // Admissibility window of the decay theory; violations are soft and can
    // be forced at run level.
    THETA_GT_GAMMA_OVER_2,
    THETA_GT_GAMMA_MINUS_1,
    THETA_GT_ONE_MINUS_ALPHA_GAMMA,
};

const char* to_string(ConstraintCode code);

struct ValidationReport {
    std::vector<ConstraintCode> hard_violations;    // always fatal
    std::vector<ConstraintCode> regime_violations;  // out of theory window
    bool theorem_regime = false;  // theta <= gamma/2, gamma-1, 1-alpha*gamma
    bool strict_regime = false;   // additionally theta < gamma-1

    bool ok() const { return hard_violations.empty(); }
    bool has(ConstraintCode code) const;
    std::string describe() const;
};

ValidationReport validate_params(const ModelParams& p);

/// Pointwise physical densities: gas mass n, liquid mass m, velocity u.
struct PhysicalState {
    double n = 0.0;
    double m = 0.0;
    double u = 0.0;
};

/// (n, m) -> (c, Q) with c = n/m, Q = m/(rho_l - m). Requires 0 < m < rho_l.
std::pair<double, double> to_transformed(double n, double m, const ModelParams& p);

/// (c, Q) -> (n, m) with m = rho_l*Q/(1+Q), n = c*m. Requires Q > 0, c >= 0.
std::pair<double, double> from_transformed(double c, double Q, const ModelParams& p);

/// h(Q) = f*rho_l^2*Q^2/(1+Q)^2, monotone in Q and bounded by f*rho_l^2.
double friction_coefficient(double Q, const ModelParams& p);

/// Hydrostatic profile (cQ_inf)(x) = (g*x)^(1/gamma) on x in [0,1].
double stationary_cq(double x, const ModelParams& p);

/// Evolved fields on the staggered mass grid: c and Q at cell centers,
/// u at nodes (u at the last node is pinned to 0).
struct TransformedState {
    double t = 0.0;
    std::vector<double> c;  // n_cells, time-invariant
    std::vector<double> Q;  // n_cells, > 0
    std::vector<double> u;  // n_cells + 1
};

/// Stationary profile and the x-weights used by the weighted diagnostics.
struct StationaryProfile {
    std::vector<double> cq_inf;       // cells: (g*x)^(1/gamma)
    std::vector<double> q_inf;        // cells: cq_inf / c
    std::vector<double> w_density;    // cells: x^(1 - 3/gamma)
    std::vector<double> w_grad;       // interior nodes: x^(((2+alpha)g - th - 1)/g)
    std::vector<double> w_grad_time;  // interior nodes: x^(((3+alpha)g - 2th - 1)/g)
};

StationaryProfile make_stationary_profile(const MassGrid& grid, const ModelParams& p,
                                          const std::vector<double>& c);

enum class ProfileKind {
    PerturbedPowerLaw,  // cQ0 = kappa(x) * x^(1/gamma), u0 = u_amp*sin(pi x)(1-x)
    Stationary,         // cQ0 = cQ_inf, u0 = 0
};

struct InitialDataSpec {
    ProfileKind profile_kind = ProfileKind::PerturbedPowerLaw;
    double kappa_lo = 0.8;       // lower envelope constant of cQ0/x^(1/gamma)
    double kappa_hi = 1.2;       // upper envelope constant
    double c_amp = 1.0;          // c0(x) = c_amp * x^alpha
    double u_amp = 0.05;         // velocity amplitude
    int perturb_wavenumber = 2;  // sinusoidal modulation of the envelope
};

/// Builds a t=0 state whose cQ0 sits inside the [kappa_lo, kappa_hi] power-law
/// envelope. Q0 divides out c0 symbolically (x^(1/gamma - alpha)), so the
/// vacuum end never sees a 0/0.
TransformedState build_initial_data(const InitialDataSpec& spec, const MassGrid& grid,
                                    const ModelParams& p);

}  // namespace driftflux
