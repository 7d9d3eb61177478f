#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include <doctest.h>

#include "driftflux/grid.hpp"

using namespace driftflux;

TEST_CASE("grid layout is uniform with interior centers") {
    MassGrid grid(16);
    CHECK(grid.dx == doctest::Approx(1.0 / 16));
    CHECK(grid.nodes.front() == 0.0);
    CHECK(grid.nodes.back() == 1.0);
    for (int j = 0; j < grid.n_cells; ++j) {
        CHECK(grid.centers[j] > 0.0);
        CHECK(grid.centers[j] < 1.0);
        CHECK(grid.centers[j] - grid.nodes[j] == doctest::Approx(grid.dx / 2));
    }
    CHECK_THROWS_AS(MassGrid(4), std::invalid_argument);
}

TEST_CASE("gradient of constants and linears") {
    MassGrid grid(8);
    std::vector<double> u(9, 3.0);
    for (double v : cell_gradient_of_node_field(u, grid)) CHECK(v == 0.0);

    for (int j = 0; j <= 8; ++j) u[j] = grid.nodes[j];
    for (double v : cell_gradient_of_node_field(u, grid)) CHECK(v == doctest::Approx(1.0));

    // quadratic, hand difference on dx = 0.25
    MassGrid g4(8);
    std::vector<double> q(9);
    for (int j = 0; j <= 8; ++j) q[j] = g4.nodes[j] * g4.nodes[j];
    // first cell of a dx=0.25 grid: (0.0625 - 0)/0.25 = 0.25
    MassGrid g_coarse(8);
    (void)g_coarse;
    const auto grad = cell_gradient_of_node_field(q, g4);
    CHECK(grad[0] == doctest::Approx((q[1] - q[0]) / g4.dx));

    std::vector<double> wrong(5, 0.0);
    CHECK_THROWS_AS(cell_gradient_of_node_field(wrong, grid), std::invalid_argument);
}

TEST_CASE("divergence of constants and linears") {
    MassGrid grid(8);
    std::vector<double> sigma(8, 2.0);
    for (double v : node_divergence_of_cell_field(sigma, grid, 2.0)) CHECK(v == 0.0);

    for (int j = 0; j < 8; ++j) sigma[j] = grid.centers[j];
    for (double v : node_divergence_of_cell_field(sigma, grid, 0.0))
        CHECK(v == doctest::Approx(1.0));

    for (int j = 0; j < 8; ++j) sigma[j] = 2.0 * grid.centers[j];
    const auto div = node_divergence_of_cell_field(sigma, grid, 0.0);
    for (size_t j = 1; j < div.size(); ++j) CHECK(div[j] == doctest::Approx(2.0));

    std::vector<double> wrong(5, 0.0);
    CHECK_THROWS_AS(node_divergence_of_cell_field(wrong, grid, 0.0),
                    std::invalid_argument);
}

TEST_CASE("summation by parts is exact with zero boundary data") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    MassGrid grid(64);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> u(grid.n_cells + 1), sigma(grid.n_cells);
        for (auto& v : u) v = dist(rng);
        u.back() = 0.0;
        for (auto& v : sigma) v = dist(rng);

        const auto div = node_divergence_of_cell_field(sigma, grid, 0.0);
        const auto grad = cell_gradient_of_node_field(u, grid);
        double lhs = 0.0;
        for (int j = 0; j < grid.n_cells; ++j) lhs += grid.node_weight(j) * u[j] * div[j];
        double rhs = 0.0;
        for (int j = 0; j < grid.n_cells; ++j) rhs -= sigma[j] * grad[j] * grid.dx;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("gradient then divergence is second order on smooth fields") {
    auto error_at = [](int n) {
        MassGrid grid(n);
        std::vector<double> u(n + 1);
        for (int j = 0; j <= n; ++j) u[j] = std::sin(2.0 * grid.nodes[j]);
        const auto grad = cell_gradient_of_node_field(u, grid);
        const auto div = node_divergence_of_cell_field(grad, grid, 0.0);
        double err = 0.0;
        for (int j = 1; j < n; ++j) {  // interior nodes: pure centered stencil
            const double exact = -4.0 * std::sin(2.0 * grid.nodes[j]);
            err = std::max(err, std::abs(div[j] - exact));
        }
        return err;
    };
    const double e1 = error_at(64), e2 = error_at(128), e3 = error_at(256);
    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    CHECK(order12 >= 1.9);
    CHECK(order23 >= 1.9);
}

TEST_CASE("quadrature helpers") {
    MassGrid grid(32);
    std::vector<double> ones_cells(32, 1.0), ones_nodes(33, 1.0);
    CHECK(integrate_cells(ones_cells, grid) == doctest::Approx(1.0));
    CHECK(integrate_nodes(ones_nodes, grid) == doctest::Approx(1.0));
}
