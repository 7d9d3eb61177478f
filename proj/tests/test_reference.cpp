#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "driftflux/reference.hpp"

using namespace driftflux;

TEST_CASE("riccati solution hand values") {
    CHECK(riccati_exact(1.0, 0.0, 1.0, 123.0) == 1.0);
    CHECK(riccati_exact(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(riccati_exact(1.0, -0.5, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(riccati_exact(1.0, -1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("riccati steps compose") {
    const double q0 = 0.8, ux = 0.7, rho = 1.3, t = 0.9;
    double q = q0;
    for (int k = 0; k < 3; ++k) q = riccati_exact(q, ux, rho, t / 3);
    CHECK(q == doctest::Approx(riccati_exact(q0, ux, rho, t)).epsilon(1e-14));
}

TEST_CASE("midpoint quadrature oracle") {
    CHECK(quadrature_oracle([](double h) { return (h * h - 1.0) / (h * h); }, 1.0, 2.0,
                            10000) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(quadrature_oracle([](double) { return 0.0; }, 0.0, 1.0, 100) == 0.0);
    CHECK(quadrature_oracle([](double) { return 1.0; }, 0.0, 1.0, 100) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(quadrature_oracle([](double) { return 1.0; }, 0.0, 1.0, 1),
                    std::invalid_argument);
}

TEST_CASE("explicit reference preserves the stationary fixed point") {
    ModelParams p;
    InitialDataSpec spec;
    spec.profile_kind = ProfileKind::Stationary;
    const auto res = explicit_reference_run(spec, p, 64, 0.05);
    MassGrid grid(64);
    for (int j = 0; j < grid.n_cells; ++j) {
        const double cq_inf = stationary_cq(grid.centers[j], p);
        CHECK(std::abs(res.state.c[j] * res.state.Q[j] - cq_inf) <= 1e-9);
    }
    for (double v : res.state.u) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("explicit reference rejects an impossible step budget") {
    ModelParams p;
    InitialDataSpec spec;
    CHECK_THROWS_AS(explicit_reference_run(spec, p, 400, 10.0, 1000),
                    std::runtime_error);
}

TEST_CASE("coarsening and grid distances") {
    std::vector<double> fine{1.0, 3.0, 5.0, 7.0};
    const auto coarse = coarsen_cells(fine);
    REQUIRE(coarse.size() == 2);
    CHECK(coarse[0] == doctest::Approx(2.0));
    CHECK(coarse[1] == doctest::Approx(6.0));
    CHECK_THROWS_AS(coarsen_cells(std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);

    MassGrid grid(8);
    std::vector<double> a(8, 1.0), b(8, 3.0);
    CHECK(l2_cell_distance(a, b, grid) == doctest::Approx(2.0));
    CHECK(richardson_order(0.4, 0.1) == doctest::Approx(2.0));
}
