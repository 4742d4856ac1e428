#pragma once

#include <functional>

#include "swingkit/paradigm.hpp"
#include "swingkit/types.hpp"

namespace swingkit {

/// Gravity-variant basin: net force G(h) restores (G < 0) below the boundary
/// altitude and reverses (G > 0) above it, with G(h_boundary) = 0.
struct BasinProfile {
    std::function<double(double)> gravity;  // N, as a function of altitude h
    double h_bottom = 0.0;                  // basin bottom (energy reference)
    double h_boundary = 0.0;                // sign-change altitude
};

/// Sine-shaped profile: G(h) = -g sin(pi h / (2 h_peak)) up to 3 h_peak, then
/// held at +g. Zero crossing (the basin boundary) sits at 2 h_peak.
BasinProfile default_profile(double g = 9.81, double h_peak = 1.0);

struct BallState {
    double altitude = 0.0;  // m
    double velocity = 0.0;  // m/s
    double mass = 1.0;      // kg
};

struct BallTrajectory {
    double dt = 0.0;
    double mass = 1.0;
    std::vector<double> time;
    std::vector<double> altitude;
    std::vector<double> velocity;

    std::size_t size() const { return time.size(); }
};

struct BallEnergy {
    double ke = 0.0;
    double pe = 0.0;
    double te = 0.0;
};

struct BallEac {
    double a_acc = 0.0;
    double a_dec = 0.0;
    double residual_energy_form = 0.0;
    double residual_area_form = 0.0;
    StabilityEvent mpp;
    bool inconclusive = false;
};

BallTrajectory simulate_ball(const BasinProfile& profile, const BallState& initial,
                             double t_end, double dt);

/// KE = 0.5 m v^2; PE = -int G dh from the basin bottom (dense trapezoid).
BallEnergy ball_energy(const BallState& state, const BasinProfile& profile);

/// First MPP after the clearing time: DSP where v crosses zero from above,
/// DLP where the altitude crosses the boundary while still climbing.
StabilityEvent classify_ball(const BallTrajectory& traj, const BasinProfile& profile,
                             double t_clear = 0.0);

/// EAC bookkeeping from the clearing state P2 to the MPP.
BallEac ball_eac(const BallTrajectory& traj, const BasinProfile& profile, double t_clear = 0.0);

}  // namespace swingkit
