#include <cmath>
#include <stdexcept>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "driftflux/io.hpp"

using namespace driftflux;

TEST_CASE("empty config yields the default scenario") {
    const auto cfg = parse_config("");
    CHECK(cfg.params.gamma == 2.0);
    CHECK(cfg.params.theta == 0.5);
    CHECK(cfg.params.alpha == 0.0);
    CHECK(cfg.params.rho_l == 1.0);
    CHECK(cfg.params.A == 1.0);
    CHECK(cfg.params.B == 1.0);
    CHECK(cfg.params.f == 1.0);
    CHECK(cfg.params.g == 1.0);
    CHECK(cfg.n_cells == 400);
    CHECK(cfg.scheme.t_end == 200.0);
    CHECK(cfg.scheme.cfl == 0.4);
    CHECK(cfg.initial.u_amp == 0.05);
    CHECK(cfg.initial.kappa_lo == 0.8);
    CHECK(cfg.initial.kappa_hi == 1.2);
    CHECK(cfg.initial.perturb_wavenumber == 2);
}

TEST_CASE("comments and whitespace are tolerated, unknown keys are not") {
    const auto cfg = parse_config("# header\n  gamma = 3.0  # inline\n\ntheta = 1\n");
    CHECK(cfg.params.gamma == 3.0);
    CHECK(cfg.params.theta == 1.0);

    CHECK_THROWS_WITH_AS(parse_config("gamme = 2\n"), doctest::Contains("unknown key"),
                         ConfigError);
}

TEST_CASE("malformed lines are reported with their line number") {
    CHECK_THROWS_WITH_AS(parse_config("gamma = 2\nnonsense\n"),
                         doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("gamma = abc\n"), doctest::Contains("line 1"),
                         ConfigError);
}

TEST_CASE("regime violations are rejected unless forced") {
    CHECK_THROWS_WITH_AS(parse_config("theta = 1.5\n"),
                         doctest::Contains("THETA_GT_GAMMA_MINUS_1"), ConfigError);
    const auto cfg = parse_config("theta = 1.5\n", /*force=*/true);
    CHECK(cfg.params.theta == 1.5);
    const auto cfg2 = parse_config("theta = 1.5\nforce_out_of_regime = true\n");
    CHECK(cfg2.params.theta == 1.5);

    // gamma = 3, theta = 1 is inside the strict window
    const auto cfg3 = parse_config("gamma = 3\ntheta = 1\n");
    CHECK(validate_params(cfg3.params).strict_regime);
}

TEST_CASE("hard violations are never forceable") {
    CHECK_THROWS_WITH_AS(parse_config("gamma = 1.0\n", true),
                         doctest::Contains("GAMMA_NOT_GT_ONE"), ConfigError);
}

TEST_CASE("serialize/parse round trip is idempotent") {
    const auto cfg = parse_config("gamma = 2.5\ntheta = 0.75\nn_cells = 64\n"
                                  "sweep_theta = 0.3, 0.5\nmax_parallel = 2\n");
    const auto text = serialize_config(cfg);
    const auto cfg2 = parse_config(text);
    CHECK(serialize_config(cfg2) == text);
    CHECK(cfg2.params.gamma == cfg.params.gamma);
    CHECK(cfg2.sweep_theta == cfg.sweep_theta);
}

TEST_CASE("timeseries header is exact and rows round-trip") {
    std::ostringstream os;
    emit_timeseries({}, os);
    CHECK(os.str() ==
          "t,E_kin,E_pot,D_visc_cum,D_fric_cum,Y_min,Y_max,l2_u,l3_u,l4_u,l5_u,"
          "sup_u,sup_Qux,w_l2,w_grad,sup_theta_dist,flux_residual,dt\n");

    DiagnosticsRecord r;
    r.t = 1.0 / 3.0;
    r.sup_u = 0.1234567890123456789;
    std::ostringstream os2;
    emit_timeseries({r}, os2);
    std::istringstream is(os2.str());
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    // full precision: the printed t must parse back to the same double
    const auto comma = row.find(',');
    CHECK(std::stod(row.substr(0, comma)) == r.t);
}

TEST_CASE("stationary run has identically quiet distance columns at t=0") {
    RunConfig cfg;
    cfg.n_cells = 64;
    cfg.scheme.t_end = 2.0;
    cfg.sample_interval = 0.5;
    cfg.initial.profile_kind = ProfileKind::Stationary;
    const auto res = run_single(cfg);
    const auto& first = res.records.front();
    CHECK(first.sup_u == 0.0);
    CHECK(first.w_l2 == 0.0);
    CHECK(first.sup_theta_dist == 0.0);
    for (const auto& r : res.records) {
        CHECK(r.sup_u <= 1e-12);
        CHECK(r.sup_theta_dist <= 1e-12);
        CHECK(r.w_l2 <= 1e-12);
        CHECK(r.flux_residual <= 1e-10);
    }
}

TEST_CASE("default run starts visibly away from the stationary state") {
    RunConfig cfg;
    cfg.n_cells = 64;
    cfg.scheme.t_end = 1.0;
    const auto res = run_single(cfg);
    CHECK(res.records.front().sup_u > 0.0);
    CHECK(res.records.front().sup_theta_dist > 0.0);
}

TEST_CASE("snapshot columns are consistent") {
    RunConfig cfg;
    cfg.n_cells = 64;
    cfg.scheme.t_end = 0.5;
    const auto res = run_single(cfg);
    MassGrid grid(cfg.n_cells);
    const auto profile = make_stationary_profile(grid, cfg.params, res.final_state.c);

    std::ostringstream os;
    emit_snapshot(res.final_state, profile, grid, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x_center,c,Q,cQ,cQ_inf,u_cell_avg");
    int rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        REQUIRE(vals.size() == 6);
        CHECK(vals[3] == doctest::Approx(vals[1] * vals[2]).epsilon(1e-14));
        ++rows;
    }
    CHECK(rows == cfg.n_cells);
}

TEST_CASE("initial snapshot respects the envelope rowwise") {
    RunConfig cfg;
    cfg.n_cells = 64;
    MassGrid grid(cfg.n_cells);
    const auto s = build_initial_data(cfg.initial, grid, cfg.params);
    for (int j = 0; j < grid.n_cells; ++j) {
        const double ratio = s.c[j] * s.Q[j] / std::sqrt(grid.centers[j]);
        CHECK(ratio >= 0.8 * (1 - 1e-13));
        CHECK(ratio <= 1.2 * (1 + 1e-13));
    }
}

TEST_CASE("sweep results are deterministic and sorted") {
    RunConfig base;
    base.n_cells = 32;
    base.scheme.t_end = 2.0;
    base.sample_interval = 0.1;
    base.sweep_theta = {0.7, 0.3, 0.5};
    base.max_parallel = 3;
    const auto rows = run_sweep(base);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].theta == 0.3);
    CHECK(rows[1].theta == 0.5);
    CHECK(rows[2].theta == 0.7);
    // theoretical rates 2*theta/6 at gamma=2
    CHECK(rows[0].theory.exponent == doctest::Approx(0.1));
    CHECK(rows[1].theory.exponent == doctest::Approx(1.0 / 6.0));
    CHECK(rows[2].theory.exponent == doctest::Approx(7.0 / 30.0));

    RunConfig serial = base;
    serial.max_parallel = 1;
    const auto rows2 = run_sweep(serial);
    std::ostringstream a, b;
    emit_sweep_summary(rows, a);
    emit_sweep_summary(rows2, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("singleton sweep behaves like a single run") {
    RunConfig base;
    base.n_cells = 32;
    base.scheme.t_end = 2.0;
    base.sample_interval = 0.1;
    const auto rows = run_sweep(base);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == "ok");
    CHECK(rows[0].gamma == 2.0);
}

TEST_CASE("out-of-regime sweep point is recorded, not fatal") {
    RunConfig base;
    base.n_cells = 32;
    base.scheme.t_end = 2.0;
    base.sample_interval = 0.1;
    base.sweep_theta = {0.5, 1.5};
    const auto rows = run_sweep(base);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "ok");
    CHECK(rows[1].status.find("THETA_GT_GAMMA_MINUS_1") != std::string::npos);
}
