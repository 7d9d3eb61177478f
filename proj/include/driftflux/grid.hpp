#pragma once

#include <span>
#include <vector>

namespace driftflux {

/// Uniform staggered mass grid on [0,1]: cell-centered densities, node
/// velocities. Cell centers are x_{j+1/2} = (j+1/2)*dx, nodes x_j = j*dx.
struct MassGrid {
    int n_cells = 0;
    double dx = 0.0;
    std::vector<double> centers;  // n_cells, strictly inside (0,1)
    std::vector<double> nodes;    // n_cells + 1, includes both endpoints

    explicit MassGrid(int n);

    /// Quadrature weight of node j: dx/2 at both endpoints, dx in the
    /// interior. Chosen so that the node inner product makes the discrete
    /// integration-by-parts identity exact.
    double node_weight(int j) const;
};

/// Two-point gradient of a node field, one value per cell. Exact for affine u.
std::vector<double> cell_gradient_of_node_field(std::span<const double> u,
                                                const MassGrid& grid);

/// Divergence of a cell field at nodes 0..n_cells-1 (the last node is a
/// Dirichlet node and never needs one). Node 0 differences the first cell
/// value against the prescribed stress at x=0 over the half spacing dx/2,
/// which keeps a linear sigma exact at every node.
std::vector<double> node_divergence_of_cell_field(std::span<const double> sigma,
                                                  const MassGrid& grid,
                                                  double left_boundary_value);

/// Midpoint quadrature of a cell field over [0,1].
double integrate_cells(std::span<const double> f, const MassGrid& grid);

/// Weighted node quadrature over [0,1] (dx/2 end weights).
double integrate_nodes(std::span<const double> f, const MassGrid& grid);

}  // namespace driftflux
