#pragma once

#include <functional>

#include "driftflux/grid.hpp"
#include "driftflux/model.hpp"

namespace driftflux {

/// Deliberately simple reference computations, independent of the implicit
/// solver path, used to cross-validate the main integrator.

struct ExplicitRunResult {
    TransformedState state;
    long n_steps = 0;
};

/// Forward-Euler everything: pressure, gravity, friction and viscosity all
/// explicit, same staggering and vacuum boundary treatment, no implicit
/// solve anywhere. Rejects runs whose diffusive step restriction would need
/// more than max_steps steps.
ExplicitRunResult explicit_reference_run(const InitialDataSpec& spec,
                                         const ModelParams& p, int n_cells,
                                         double t_end,
                                         long max_steps = 100'000'000);

/// Q(t) = Q0 / (1 + rho_l*Q0*u_x*t), the exact solution with frozen gradient.
/// Throws on finite-time degeneracy (denominator <= 0).
double riccati_exact(double q0, double u_x, double rho_l, double t);

/// Midpoint rule with the given number of panels; deterministic.
double quadrature_oracle(const std::function<double(double)>& f, double a, double b,
                         int panels);

/// Restricts a cell field to a grid with half the cells by averaging pairs.
std::vector<double> coarsen_cells(const std::vector<double>& fine);

/// L2 distance of two cell fields on the same grid.
double l2_cell_distance(const std::vector<double>& a, const std::vector<double>& b,
                        const MassGrid& grid);

/// Convergence order from distances between successive grid refinements:
/// log2(d_coarse / d_fine).
double richardson_order(double d_coarse, double d_fine);

}  // namespace driftflux
