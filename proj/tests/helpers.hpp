#pragma once

#include <cmath>
#include <random>

#include "swingkit/assess.hpp"
#include "swingkit/swing.hpp"

namespace swingkit::testing {

/// Single machine against an effectively infinite bus (huge-inertia machine 2).
/// Transfer susceptance is pmax (E = 1 both sides); G = 0.
struct Smib {
    SimCase sc;
    double pm = 0.0;
    double pmax_pre = 0.0;
    double pmax_fault = 0.0;
    double pmax_post = 0.0;
    double delta_s = 0.0;  // pre-fault equilibrium angle, rad
};

inline Smib make_smib(double pm, double pmax_pre, double pmax_fault, double pmax_post) {
    Smib s;
    s.pm = pm;
    s.pmax_pre = pmax_pre;
    s.pmax_fault = pmax_fault;
    s.pmax_post = pmax_post;
    s.delta_s = std::asin(pm / pmax_pre);

    const double m_bus = 1e8;
    s.sc.machines = {{"G1", 0.05, pm, 1.0}, {"BUS", m_bus, -pm, 1.0}};

    auto stage = [](StageLabel label, double pmax) {
        NetworkStage st;
        st.label = label;
        st.conductance = SquareMatrix(2);
        st.susceptance = SquareMatrix(2);
        st.susceptance(0, 1) = pmax;
        st.susceptance(1, 0) = pmax;
        return st;
    };
    s.sc.prefault = stage(StageLabel::Prefault, pmax_pre);
    s.sc.fault_on = stage(StageLabel::FaultOn, pmax_fault);
    s.sc.postfault = stage(StageLabel::Postfault, pmax_post);
    s.sc.initial.delta = {s.delta_s, 0.0};
    s.sc.initial.omega = {0.0, 0.0};
    return s;
}

/// Analytic EAC critical clearing angle for a bolted fault (fault-on pmax = 0)
/// with an unchanged post-fault network.
inline double smib_critical_angle(double pm, double pmax) {
    const double d0 = std::asin(pm / pmax);
    const double dmax = M_PI - d0;
    return std::acos((pm * (dmax - d0) + pmax * std::cos(dmax)) / pmax);
}

/// Clearing time reaching the critical angle under constant acceleration pm/M.
inline double smib_critical_time(double pm, double pmax, double inertia) {
    const double d0 = std::asin(pm / pmax);
    const double dc = smib_critical_angle(pm, pmax);
    return std::sqrt(2.0 * inertia * (dc - d0) / pm);
}

struct RandomCase {
    SimCase sc;
    double t0 = 0.0;
    double tc = 0.0;
    double t_end = 0.0;
    double dt = 1e-3;
};

/// Desk-scale lossless case: ring network with random chords, equilibrium
/// manufactured by setting Pm from the pre-fault electrical power, and a fault
/// that weakens one machine's couplings.
inline RandomCase make_random_case(std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> n_dist(2, 10);
    std::uniform_real_distribution<double> h_dist(2.5, 8.0);
    std::uniform_real_distribution<double> e_dist(0.95, 1.1);
    std::uniform_real_distribution<double> ring_b(1.0, 2.5);
    std::uniform_real_distribution<double> chord_b(0.3, 1.2);
    std::uniform_real_distribution<double> angle(-0.2, 0.2);
    std::uniform_real_distribution<double> fault_scale(0.0, 0.25);
    std::uniform_real_distribution<double> post_scale(0.85, 1.0);
    std::uniform_real_distribution<double> dur_dist(0.08, 0.30);

    RandomCase rc;
    const std::size_t n = n_dist(rng);
    for (std::size_t i = 0; i < n; ++i) {
        rc.sc.machines.push_back({"M" + std::to_string(i + 1),
                                  2.0 * h_dist(rng) / (2.0 * M_PI * 60.0), 0.0, e_dist(rng)});
    }

    SquareMatrix b(n);
    if (n == 2) {
        b(0, 1) = b(1, 0) = ring_b(rng);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            const double v = ring_b(rng);
            b(i, j) += v;
            b(j, i) += v;
        }
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t c = 0; c < n / 2; ++c) {
            const std::size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            const double v = chord_b(rng);
            b(i, j) += v;
            b(j, i) += v;
        }
    }

    auto stage = [&](StageLabel label, const SquareMatrix& bb) {
        NetworkStage st;
        st.label = label;
        st.conductance = SquareMatrix(n);
        st.susceptance = bb;
        return st;
    };
    rc.sc.prefault = stage(StageLabel::Prefault, b);

    const std::size_t faulted = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    SquareMatrix b_fault = b, b_post = b;
    const double lf = fault_scale(rng), lp = post_scale(rng);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == faulted) continue;
        b_fault(faulted, j) *= lf;
        b_fault(j, faulted) *= lf;
        b_post(faulted, j) *= lp;
        b_post(j, faulted) *= lp;
    }
    rc.sc.fault_on = stage(StageLabel::FaultOn, b_fault);
    rc.sc.postfault = stage(StageLabel::Postfault, b_post);

    rc.sc.initial.delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) rc.sc.initial.delta[i] = angle(rng);
    rc.sc.initial.omega.assign(n, 0.0);
    const std::vector<double> pe =
        electrical_power(rc.sc.initial.delta, rc.sc.prefault, rc.sc.machines);
    for (std::size_t i = 0; i < n; ++i) rc.sc.machines[i].mech_power = pe[i];

    rc.dt = 1e-3;
    rc.t0 = 0.02;
    rc.tc = rc.t0 + std::round(dur_dist(rng) / rc.dt) * rc.dt;
    rc.t_end = rc.tc + 5.0;
    return rc;
}

inline std::string data_path(const char* name) {
    return std::string(SWINGKIT_DATA_DIR) + "/" + name;
}

}  // namespace swingkit::testing
