#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "swingkit/swing.hpp"

using namespace swingkit;
using namespace swingkit::testing;

TEST_CASE("electrical power matches the closed form for two machines") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    const std::vector<double> delta = {0.7, 0.1};
    const auto pe = electrical_power(delta, s.sc.prefault, s.sc.machines);
    const double expect = 2.0 * std::sin(0.7 - 0.1);
    CHECK(pe[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(pe[1] == doctest::Approx(-expect).epsilon(1e-12));
}

TEST_CASE("conductance diagonal contributes a local loss term") {
    SimCase sc;
    sc.machines = {{"A", 0.1, 0.0, 1.1}, {"B", 0.1, 0.0, 1.0}};
    NetworkStage st;
    st.conductance = SquareMatrix(2);
    st.susceptance = SquareMatrix(2);
    st.conductance(0, 0) = 0.5;
    st.conductance(0, 1) = st.conductance(1, 0) = 0.2;
    st.susceptance(0, 1) = st.susceptance(1, 0) = 1.5;
    const std::vector<double> delta = {0.3, -0.1};
    const auto pe = electrical_power(delta, st, sc.machines);
    const double d = 0.4;
    CHECK(pe[0] == doctest::Approx(1.1 * 1.1 * 0.5 +
                                   1.1 * 1.0 * (0.2 * std::cos(d) + 1.5 * std::sin(d)))
                       .epsilon(1e-12));
}

TEST_CASE("derivatives implement the swing equation") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    SystemSnapshot snap;
    snap.delta = {0.9, 0.0};
    snap.omega = {2.0, 0.0};
    std::vector<double> dd, dw;
    derivatives(snap, s.sc.prefault, s.sc.machines, dd, dw);
    CHECK(dd[0] == 2.0);
    CHECK(dd[1] == 0.0);
    CHECK(dw[0] == doctest::Approx((1.0 - 2.0 * std::sin(0.9)) / 0.05).epsilon(1e-12));
}

TEST_CASE("manufactured equilibrium has zero residual and does not drift") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    CHECK(equilibrium_residual(s.sc) < 1e-12);

    // No fault ever applied: the whole horizon runs on the pre-fault network.
    const auto traj = simulate(s.sc, 5.0, 5.0, 5.0, 1e-3);
    double drift = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        drift = std::max(drift, std::abs(traj.delta[k][0] - s.delta_s));
        drift = std::max(drift, std::abs(traj.omega[k][0]));
    }
    CHECK(drift < 1e-9);
}

TEST_CASE("RK4 shows fourth-order convergence on the SMIB swing") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    const double t_end = 0.4;
    auto endpoint = [&](double dt) {
        const auto traj = simulate(s.sc, 0.0, 0.1, t_end, dt);
        return traj.delta.back()[0];
    };
    const double ref = endpoint(1e-5);
    const double e1 = std::abs(endpoint(4e-3) - ref);
    const double e2 = std::abs(endpoint(2e-3) - ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}

TEST_CASE("stage boundaries are half-open on the integration grid") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    const double dt = 1e-3;
    const auto traj = simulate(s.sc, 0.010, 0.020, 0.030, dt);
    const std::size_t k0 = 10, kc = 20;
    // net_force records the stage active at each sample: fault-on transfers no
    // power, so the net force jumps to Pm at t0 and back at tc.
    CHECK(traj.net_force[k0 - 1][0] == doctest::Approx(1.0 - 2.0 * std::sin(traj.delta[k0 - 1][0])));
    CHECK(traj.net_force[k0][0] == doctest::Approx(1.0));
    CHECK(traj.net_force[kc - 1][0] == doctest::Approx(1.0));
    CHECK(traj.net_force[kc][0] ==
          doctest::Approx(1.0 - 2.0 * std::sin(traj.delta[kc][0] - traj.delta[kc][1])));
    CHECK(traj.t_fault == doctest::Approx(0.010));
    CHECK(traj.t_clear == doctest::Approx(0.020));
    CHECK(traj.clearing_index() == kc);
}

TEST_CASE("fault times snap to the nearest grid point") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    const auto traj = simulate(s.sc, 0.0101, 0.0199, 0.03, 1e-3);
    CHECK(traj.t_fault == doctest::Approx(0.010));
    CHECK(traj.t_clear == doctest::Approx(0.020));
}

TEST_CASE("lossless momentum stays at zero through a fault") {
    std::mt19937 rng(7);
    RandomCase rc = make_random_case(rng);
    const auto traj = simulate(rc.sc, rc.t0, rc.tc, rc.tc + 1.0, rc.dt);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        double p = 0.0;
        for (std::size_t i = 0; i < rc.sc.machine_count(); ++i) {
            p += rc.sc.machines[i].inertia * traj.omega[k][i];
        }
        worst = std::max(worst, std::abs(p));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("non-finite initial state raises SimulationDiverged") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    s.sc.initial.delta[0] = std::nan("");
    CHECK_THROWS_AS(simulate(s.sc, 0.0, 0.1, 1.0, 1e-3), SimulationDiverged);
}

TEST_CASE("an unstable blow-up reports the last valid time") {
    // Huge accelerating power with no transfer capability at all: delta grows
    // without bound; the quadratic overflow point is reached quickly.
    SimCase sc;
    sc.machines = {{"A", 1e-6, 1e6, 1.0}, {"B", 1e-6, -1e6, 1.0}};
    NetworkStage st;
    st.conductance = SquareMatrix(2);
    st.susceptance = SquareMatrix(2);
    sc.prefault = sc.fault_on = sc.postfault = st;
    sc.initial.delta = {0.0, 0.0};
    sc.initial.omega = {0.0, 0.0};
    sc.machines[0].mech_power = 1e305;
    sc.machines[1].mech_power = -1e305;
    try {
        simulate(sc, 0.0, 0.0, 10.0, 1e-3);
        FAIL("expected SimulationDiverged");
    } catch (const SimulationDiverged& e) {
        CHECK(e.last_valid_time >= 0.0);
        CHECK(e.last_valid_time < 10.0);
    }
}

TEST_CASE("shape validation names the offending stage") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    s.sc.fault_on.susceptance = SquareMatrix(3);
    try {
        simulate(s.sc, 0.0, 0.1, 1.0, 1e-3);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("fault_on") != std::string::npos);
    }
}

TEST_CASE("bad schedules and unknown machine ids are rejected") {
    Smib s = make_smib(1.0, 2.0, 0.0, 2.0);
    CHECK_THROWS_AS(simulate(s.sc, 0.2, 0.1, 1.0, 1e-3), ValidationError);
    CHECK_THROWS_AS(simulate(s.sc, 0.0, 0.1, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(simulate(s.sc, 0.0, 0.1, 1.0, -1e-3), ValidationError);
    CHECK(s.sc.index_of("BUS") == 1);
    CHECK_THROWS_AS(s.sc.index_of("nope"), ValidationError);
}
