#include "driftflux/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pow_util.hpp"

namespace driftflux {

const char* to_string(ConstraintCode code) {
    switch (code) {
        case ConstraintCode::NON_FINITE_PARAM: return "NON_FINITE_PARAM";
        case ConstraintCode::GAMMA_NOT_GT_ONE: return "GAMMA_NOT_GT_ONE";
        case ConstraintCode::THETA_NOT_POSITIVE: return "THETA_NOT_POSITIVE";
        case ConstraintCode::ALPHA_OUT_OF_RANGE: return "ALPHA_OUT_OF_RANGE";
        case ConstraintCode::RHO_L_NOT_POSITIVE: return "RHO_L_NOT_POSITIVE";
        case ConstraintCode::A_NOT_POSITIVE: return "A_NOT_POSITIVE";
        case ConstraintCode::B_NOT_POSITIVE: return "B_NOT_POSITIVE";
        case ConstraintCode::F_NEGATIVE: return "F_NEGATIVE";
        case ConstraintCode::G_NOT_POSITIVE: return "G_NOT_POSITIVE";
        case ConstraintCode::THETA_GT_GAMMA_OVER_2: return "THETA_GT_GAMMA_OVER_2";
        case ConstraintCode::THETA_GT_GAMMA_MINUS_1: return "THETA_GT_GAMMA_MINUS_1";
        case ConstraintCode::THETA_GT_ONE_MINUS_ALPHA_GAMMA:
            return "THETA_GT_ONE_MINUS_ALPHA_GAMMA";
    }
    return "UNKNOWN";
}

bool ValidationReport::has(ConstraintCode code) const {
    auto in = [code](const std::vector<ConstraintCode>& v) {
        return std::find(v.begin(), v.end(), code) != v.end();
    };
    return in(hard_violations) || in(regime_violations);
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    if (hard_violations.empty() && regime_violations.empty()) return "ok";
    for (auto c : hard_violations) os << to_string(c) << " ";
    for (auto c : regime_violations) os << to_string(c) << " ";
    auto s = os.str();
    if (!s.empty()) s.pop_back();
    return s;
}

ValidationReport validate_params(const ModelParams& p) {
    ValidationReport r;
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.gamma) || !finite(p.theta) || !finite(p.alpha) || !finite(p.rho_l) ||
        !finite(p.A) || !finite(p.B) || !finite(p.f) || !finite(p.g))
        r.hard_violations.push_back(ConstraintCode::NON_FINITE_PARAM);

    if (!(p.gamma > 1.0)) r.hard_violations.push_back(ConstraintCode::GAMMA_NOT_GT_ONE);
    if (!(p.theta > 0.0)) r.hard_violations.push_back(ConstraintCode::THETA_NOT_POSITIVE);
    if (!(p.alpha >= 0.0) || !(p.alpha * p.gamma < 1.0))
        r.hard_violations.push_back(ConstraintCode::ALPHA_OUT_OF_RANGE);
    if (!(p.rho_l > 0.0)) r.hard_violations.push_back(ConstraintCode::RHO_L_NOT_POSITIVE);
    if (!(p.A > 0.0)) r.hard_violations.push_back(ConstraintCode::A_NOT_POSITIVE);
    if (!(p.B > 0.0)) r.hard_violations.push_back(ConstraintCode::B_NOT_POSITIVE);
    if (!(p.f >= 0.0)) r.hard_violations.push_back(ConstraintCode::F_NEGATIVE);
    if (!(p.g > 0.0)) r.hard_violations.push_back(ConstraintCode::G_NOT_POSITIVE);
    if (!r.hard_violations.empty()) return r;

    if (p.theta > 0.5 * p.gamma)
        r.regime_violations.push_back(ConstraintCode::THETA_GT_GAMMA_OVER_2);
    if (p.theta > p.gamma - 1.0)
        r.regime_violations.push_back(ConstraintCode::THETA_GT_GAMMA_MINUS_1);
    if (p.theta > 1.0 - p.alpha * p.gamma)
        r.regime_violations.push_back(ConstraintCode::THETA_GT_ONE_MINUS_ALPHA_GAMMA);

    r.theorem_regime = r.regime_violations.empty();
    r.strict_regime = r.theorem_regime && p.theta < p.gamma - 1.0;
    return r;
}

std::pair<double, double> to_transformed(double n, double m, const ModelParams& p) {
    if (!(m > 0.0)) throw std::domain_error("to_transformed: m = 0 makes c = n/m undefined");
    if (!(m < p.rho_l)) throw std::domain_error("to_transformed: m must be < rho_l");
    if (!(n >= 0.0)) throw std::domain_error("to_transformed: n must be >= 0");
    return {n / m, m / (p.rho_l - m)};
}

std::pair<double, double> from_transformed(double c, double Q, const ModelParams& p) {
    if (!(Q > 0.0)) throw std::domain_error("from_transformed: Q must be > 0");
    if (!(c >= 0.0)) throw std::domain_error("from_transformed: c must be >= 0");
    const double m = p.rho_l * Q / (1.0 + Q);
    return {c * m, m};
}

double friction_coefficient(double Q, const ModelParams& p) {
    if (!(Q >= 0.0)) throw std::domain_error("friction_coefficient: Q must be >= 0");
    const double r = Q / (1.0 + Q);
    return p.f * p.rho_l * p.rho_l * r * r;
}

double stationary_cq(double x, const ModelParams& p) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("stationary_cq: x outside [0,1]");
    if (x == 0.0) return 0.0;
    return detail::pow_fast(p.g * x, 1.0 / p.gamma);
}

StationaryProfile make_stationary_profile(const MassGrid& grid, const ModelParams& p,
                                          const std::vector<double>& c) {
    StationaryProfile sp;
    const int n = grid.n_cells;
    sp.cq_inf.resize(n);
    sp.q_inf.resize(n);
    sp.w_density.resize(n);
    const double e_density = 1.0 - 3.0 / p.gamma;
    const double e_grad = ((2.0 + p.alpha) * p.gamma - p.theta - 1.0) / p.gamma;
    const double e_grad_t = ((3.0 + p.alpha) * p.gamma - 2.0 * p.theta - 1.0) / p.gamma;
    for (int j = 0; j < n; ++j) {
        const double x = grid.centers[j];
        sp.cq_inf[j] = stationary_cq(x, p);
        sp.q_inf[j] = sp.cq_inf[j] / c[j];
        sp.w_density[j] = std::pow(x, e_density);
    }
    sp.w_grad.resize(n - 1);
    sp.w_grad_time.resize(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        const double x = grid.nodes[j + 1];  // node shared by cells j, j+1
        sp.w_grad[j] = std::pow(x, e_grad);
        sp.w_grad_time[j] = std::pow(x, e_grad_t);
    }
    return sp;
}

TransformedState build_initial_data(const InitialDataSpec& spec, const MassGrid& grid,
                                    const ModelParams& p) {
    if (!(spec.kappa_lo > 0.0))
        throw std::invalid_argument("build_initial_data: kappa_lo must be > 0");
    if (!(spec.kappa_lo <= spec.kappa_hi))
        throw std::invalid_argument("build_initial_data: kappa_lo must be <= kappa_hi");
    if (!(spec.c_amp > 0.0))
        throw std::invalid_argument("build_initial_data: c_amp must be > 0");

    const int n = grid.n_cells;
    TransformedState s;
    s.t = 0.0;
    s.c.resize(n);
    s.Q.resize(n);
    s.u.assign(n + 1, 0.0);

    for (int j = 0; j < n; ++j) {
        const double x = grid.centers[j];
        s.c[j] = spec.c_amp * std::pow(x, p.alpha);
    }

    if (spec.profile_kind == ProfileKind::Stationary) {
        for (int j = 0; j < n; ++j)
            s.Q[j] = stationary_cq(grid.centers[j], p) / s.c[j];
        return s;
    }

    // cQ0 = kappa(x) * x^(1/gamma); dividing by c0 = c_amp * x^alpha
    // symbolically leaves x^(1/gamma - alpha), well-defined since
    // alpha < 1/gamma.
    const double e_q = 1.0 / p.gamma - p.alpha;
    for (int j = 0; j < n; ++j) {
        const double x = grid.centers[j];
        double kappa = spec.kappa_lo +
                       (spec.kappa_hi - spec.kappa_lo) *
                           (1.0 + std::sin(2.0 * std::numbers::pi *
                                           spec.perturb_wavenumber * x)) / 2.0;
        kappa = std::clamp(kappa, spec.kappa_lo, spec.kappa_hi);
        s.Q[j] = kappa * std::pow(x, e_q) / spec.c_amp;
    }
    for (int j = 0; j <= n; ++j) {
        const double x = grid.nodes[j];
        s.u[j] = spec.u_amp * std::sin(std::numbers::pi * x) * (1.0 - x);
    }
    s.u[n] = 0.0;  // exact Dirichlet end
    return s;
}

}  // namespace driftflux
