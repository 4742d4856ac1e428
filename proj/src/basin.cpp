#include "swingkit/basin.hpp"

#include <cmath>

namespace swingkit {

BasinProfile default_profile(double g, double h_peak) {
    if (g <= 0.0 || h_peak <= 0.0) throw ValidationError("default_profile: g and h_peak must be positive");
    BasinProfile p;
    p.h_bottom = 0.0;
    p.h_boundary = 2.0 * h_peak;
    p.gravity = [g, h_peak](double h) {
        const double h_hold = 3.0 * h_peak;
        if (h > h_hold) return g;
        return -g * std::sin(M_PI * h / (2.0 * h_peak));
    };
    return p;
}

BallTrajectory simulate_ball(const BasinProfile& profile, const BallState& initial,
                             double t_end, double dt) {
    if (dt <= 0.0) throw ValidationError("simulate_ball: dt must be positive");
    if (initial.mass <= 0.0) throw ValidationError("simulate_ball: mass must be positive");

    const long steps = std::lround(t_end / dt);
    BallTrajectory traj;
    traj.dt = dt;
    traj.mass = initial.mass;
    traj.time.reserve(static_cast<std::size_t>(steps) + 1);

    double h = initial.altitude;
    double v = initial.velocity;
    const double inv_m = 1.0 / initial.mass;
    auto accel = [&](double hh) { return profile.gravity(hh) * inv_m; };

    traj.time.push_back(0.0);
    traj.altitude.push_back(h);
    traj.velocity.push_back(v);
    for (long k = 0; k < steps; ++k) {
        const double k1h = v, k1v = accel(h);
        const double k2h = v + 0.5 * dt * k1v, k2v = accel(h + 0.5 * dt * k1h);
        const double k3h = v + 0.5 * dt * k2v, k3v = accel(h + 0.5 * dt * k2h);
        const double k4h = v + dt * k3v, k4v = accel(h + dt * k3h);
        h += dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!std::isfinite(h) || !std::isfinite(v)) {
            throw SimulationDiverged(static_cast<double>(k) * dt);
        }
        traj.time.push_back(static_cast<double>(k + 1) * dt);
        traj.altitude.push_back(h);
        traj.velocity.push_back(v);
    }
    return traj;
}

/// Dense trapezoid of -G between two altitudes.
static double pe_between(const BasinProfile& profile, double h_from, double h_to) {
    const double span = h_to - h_from;
    if (span == 0.0) return 0.0;
    const std::size_t steps = std::max<std::size_t>(64, static_cast<std::size_t>(std::abs(span) * 4096.0));
    const double dh = span / static_cast<double>(steps);
    double sum = 0.0;
    double g_prev = -profile.gravity(h_from);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double g_next = -profile.gravity(h_from + dh * static_cast<double>(k));
        sum += 0.5 * (g_prev + g_next) * dh;
        g_prev = g_next;
    }
    return sum;
}

BallEnergy ball_energy(const BallState& state, const BasinProfile& profile) {
    BallEnergy e;
    e.ke = 0.5 * state.mass * state.velocity * state.velocity;
    e.pe = pe_between(profile, profile.h_bottom, state.altitude);
    e.te = e.ke + e.pe;
    return e;
}

StabilityEvent classify_ball(const BallTrajectory& traj, const BasinProfile& profile,
                             double t_clear) {
    StabilityEvent ev;
    ev.expression = Expression::Ball;
    ev.machine = "ball";
    if (traj.size() < 2) return ev;

    std::size_t ic = 0;
    while (ic + 1 < traj.size() && traj.time[ic] < t_clear - 1e-12) ++ic;

    if (std::abs(traj.velocity[ic]) < 1e-12 &&
        std::abs(traj.altitude[ic] - profile.h_bottom) < 1e-12) {
        ev.non_disturbed = true;
        return ev;
    }

    for (std::size_t k = ic; k + 1 < traj.size(); ++k) {
        const double v0 = traj.velocity[k], v1 = traj.velocity[k + 1];
        const double h0 = traj.altitude[k] - profile.h_boundary;
        const double h1 = traj.altitude[k + 1] - profile.h_boundary;
        if (v0 > 0.0 && v1 <= 0.0) {
            const double frac = v0 / (v0 - v1);
            ev.kind = EventKind::Dsp;
            ev.time = traj.time[k] + frac * traj.dt;
            ev.delta_rel = traj.altitude[k] + frac * (traj.altitude[k + 1] - traj.altitude[k]);
            return ev;
        }
        if (h0 < 0.0 && h1 >= 0.0) {
            const double frac = h0 / (h0 - h1);
            const double v_at = v0 + frac * (v1 - v0);
            if (v_at > 0.0) {
                ev.kind = EventKind::Dlp;
                ev.time = traj.time[k] + frac * traj.dt;
                ev.delta_rel = profile.h_boundary;
                return ev;
            }
        }
    }
    return ev;
}

BallEac ball_eac(const BallTrajectory& traj, const BasinProfile& profile, double t_clear) {
    BallEac eac;
    eac.mpp = classify_ball(traj, profile, t_clear);
    if (traj.size() < 2) {
        eac.inconclusive = true;
        return eac;
    }

    std::size_t ic = 0;
    while (ic + 1 < traj.size() && traj.time[ic] < t_clear - 1e-12) ++ic;
    eac.a_acc = 0.5 * traj.mass * traj.velocity[ic] * traj.velocity[ic];

    if (eac.mpp.kind == EventKind::Inconclusive) {
        eac.inconclusive = true;
        return eac;
    }

    std::size_t kev = ic;
    while (kev + 1 < traj.size() && traj.time[kev + 1] <= eac.mpp.time + 1e-15) ++kev;
    if (kev + 1 >= traj.size()) kev = traj.size() - 2;
    const double frac = std::min(std::max((eac.mpp.time - traj.time[kev]) / traj.dt, 0.0), 1.0);
    const double h_ev = traj.altitude[kev] + frac * (traj.altitude[kev + 1] - traj.altitude[kev]);

    // Energy form: cumulative PE rise along the trajectory grid, clearing -> MPP.
    double dpe = 0.0;
    for (std::size_t k = ic; k < kev; ++k) {
        dpe += -0.5 * (profile.gravity(traj.altitude[k]) + profile.gravity(traj.altitude[k + 1])) *
               (traj.altitude[k + 1] - traj.altitude[k]);
    }
    dpe += -0.5 * (profile.gravity(traj.altitude[kev]) + profile.gravity(h_ev)) *
           (h_ev - traj.altitude[kev]);
    eac.residual_energy_form = eac.a_acc - dpe;

    // Area form: deceleration area summed backwards from the MPP.
    double a_dec = -0.5 * (profile.gravity(h_ev) + profile.gravity(traj.altitude[kev])) *
                   (h_ev - traj.altitude[kev]);
    for (std::size_t k = kev; k > ic; --k) {
        a_dec += -0.5 * (profile.gravity(traj.altitude[k]) + profile.gravity(traj.altitude[k - 1])) *
                 (traj.altitude[k] - traj.altitude[k - 1]);
    }
    eac.a_dec = a_dec;
    eac.residual_area_form = eac.a_acc - eac.a_dec;
    eac.mpp.residual_ke = eac.residual_energy_form;
    return eac;
}

}  // namespace swingkit
