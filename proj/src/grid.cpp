#include "driftflux/grid.hpp"

#include <stdexcept>

namespace driftflux {

MassGrid::MassGrid(int n) : n_cells(n), dx(1.0 / n) {
    if (n < 8) throw std::invalid_argument("MassGrid: n_cells must be >= 8");
    centers.resize(n_cells);
    nodes.resize(n_cells + 1);
    for (int j = 0; j < n_cells; ++j) centers[j] = (j + 0.5) * dx;
    for (int j = 0; j <= n_cells; ++j) nodes[j] = j * dx;
}

double MassGrid::node_weight(int j) const {
    return (j == 0 || j == n_cells) ? 0.5 * dx : dx;
}

std::vector<double> cell_gradient_of_node_field(std::span<const double> u,
                                                const MassGrid& grid) {
    if (static_cast<int>(u.size()) != grid.n_cells + 1)
        throw std::invalid_argument("cell_gradient: node field has wrong length");
    std::vector<double> out(grid.n_cells);
    const double inv_dx = 1.0 / grid.dx;
    for (int j = 0; j < grid.n_cells; ++j) out[j] = (u[j + 1] - u[j]) * inv_dx;
    return out;
}

std::vector<double> node_divergence_of_cell_field(std::span<const double> sigma,
                                                  const MassGrid& grid,
                                                  double left_boundary_value) {
    if (static_cast<int>(sigma.size()) != grid.n_cells)
        throw std::invalid_argument("node_divergence: cell field has wrong length");
    std::vector<double> out(grid.n_cells);
    const double inv_dx = 1.0 / grid.dx;
    // The vacuum node sits dx/2 from the first cell center; the prescribed
    // stress lives at x = 0 itself, so the half spacing keeps linear fields
    // exact here too.
    out[0] = (sigma[0] - left_boundary_value) * 2.0 * inv_dx;
    for (int j = 1; j < grid.n_cells; ++j)
        out[j] = (sigma[j] - sigma[j - 1]) * inv_dx;
    return out;
}

double integrate_cells(std::span<const double> f, const MassGrid& grid) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * grid.dx;
}

double integrate_nodes(std::span<const double> f, const MassGrid& grid) {
    double s = 0.0;
    const int n = grid.n_cells;
    for (int j = 0; j <= n; ++j) s += grid.node_weight(j) * f[j];
    return s;
}

}  // namespace driftflux
