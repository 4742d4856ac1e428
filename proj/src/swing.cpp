#include "swingkit/swing.hpp"

#include <cmath>
#include <cstdlib>

namespace swingkit {

const char* to_string(StageLabel s) {
    switch (s) {
        case StageLabel::Prefault: return "prefault";
        case StageLabel::FaultOn: return "fault_on";
        case StageLabel::Postfault: return "postfault";
    }
    return "?";
}

std::size_t SystemTrajectory::clearing_index() const {
    for (std::size_t k = 0; k < time.size(); ++k) {
        if (time[k] >= t_clear - 1e-12) return k;
    }
    return time.empty() ? 0 : time.size() - 1;
}

std::size_t SimCase::index_of(const MachineId& id) const {
    for (std::size_t i = 0; i < machines.size(); ++i) {
        if (machines[i].id == id) return i;
    }
    throw ValidationError("unknown machine id: " + id);
}

static void check_shapes(std::size_t n, const NetworkStage& stage) {
    if (stage.conductance.n != n || stage.susceptance.n != n) {
        throw ValidationError(std::string("stage ") + to_string(stage.label) +
                              ": matrix dimension does not match machine count");
    }
}

std::vector<double> electrical_power(const std::vector<double>& delta,
                                     const NetworkStage& stage,
                                     const std::vector<MachineParams>& machines) {
    const std::size_t n = machines.size();
    if (delta.size() != n) throw ValidationError("delta vector length does not match machine count");
    check_shapes(n, stage);

    const SquareMatrix& g = stage.conductance;
    const SquareMatrix& b = stage.susceptance;
    std::vector<double> pe(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double ei = machines[i].internal_emf;
        double p = ei * ei * g(i, i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dij = delta[i] - delta[j];
            p += ei * machines[j].internal_emf * (g(i, j) * std::cos(dij) + b(i, j) * std::sin(dij));
        }
        pe[i] = p;
    }
    return pe;
}

void derivatives(const SystemSnapshot& snap, const NetworkStage& stage,
                 const std::vector<MachineParams>& machines,
                 std::vector<double>& ddelta, std::vector<double>& domega) {
    const std::size_t n = machines.size();
    if (snap.delta.size() != n || snap.omega.size() != n) {
        throw ValidationError("snapshot vector length does not match machine count");
    }
    const std::vector<double> pe = electrical_power(snap.delta, stage, machines);
    ddelta = snap.omega;
    domega.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        domega[i] = (machines[i].mech_power - pe[i]) / machines[i].inertia;
    }
}

double equilibrium_residual(const SimCase& sc) {
    const std::vector<double> pe = electrical_power(sc.initial.delta, sc.prefault, sc.machines);
    double r = 0.0;
    for (std::size_t i = 0; i < sc.machines.size(); ++i) {
        r = std::max(r, std::abs(sc.machines[i].mech_power - pe[i]));
    }
    return r;
}

namespace {

// RHS evaluation without re-allocating; delta/omega given as flat vectors.
void rhs(const std::vector<double>& delta, const std::vector<double>& omega,
         const NetworkStage& stage, const std::vector<MachineParams>& machines,
         std::vector<double>& dd, std::vector<double>& dw) {
    const std::vector<double> pe = electrical_power(delta, stage, machines);
    const std::size_t n = machines.size();
    dd = omega;
    dw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dw[i] = (machines[i].mech_power - pe[i]) / machines[i].inertia;
    }
}

}  // namespace

SystemTrajectory simulate(const SimCase& sc, double t0, double tc, double t_end, double dt) {
    const std::size_t n = sc.machine_count();
    if (dt <= 0.0) throw ValidationError("dt must be positive");
    if (!(t0 <= tc && tc <= t_end)) throw ValidationError("fault times must satisfy t0 <= tc <= t_end");
    if (sc.initial.delta.size() != n || sc.initial.omega.size() != n) {
        throw ValidationError("initial snapshot length does not match machine count");
    }
    check_shapes(n, sc.prefault);
    check_shapes(n, sc.fault_on);
    check_shapes(n, sc.postfault);

    const long k0 = std::lround(t0 / dt);
    const long kc = std::lround(tc / dt);
    const long ke = std::lround(t_end / dt);

    SystemTrajectory traj;
    traj.dt = dt;
    traj.t_fault = static_cast<double>(k0) * dt;
    traj.t_clear = static_cast<double>(kc) * dt;
    traj.time.reserve(static_cast<std::size_t>(ke) + 1);

    auto stage_at = [&](long k) -> const NetworkStage& {
        if (k < k0) return sc.prefault;
        if (k < kc) return sc.fault_on;
        return sc.postfault;
    };

    std::vector<double> delta = sc.initial.delta;
    std::vector<double> omega = sc.initial.omega;
    std::vector<double> d1, w1, d2, w2, d3, w3, d4, w4, td, tw;

    auto record = [&](long k) {
        traj.time.push_back(static_cast<double>(k) * dt);
        traj.delta.push_back(delta);
        traj.omega.push_back(omega);
        traj.net_force.push_back({});
        const std::vector<double> pe = electrical_power(delta, stage_at(k), sc.machines);
        std::vector<double>& f = traj.net_force.back();
        f.resize(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = sc.machines[i].mech_power - pe[i];
    };

    record(0);
    for (long k = 0; k < ke; ++k) {
        const NetworkStage& stage = stage_at(k);

        rhs(delta, omega, stage, sc.machines, d1, w1);
        td.resize(n);
        tw.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            td[i] = delta[i] + 0.5 * dt * d1[i];
            tw[i] = omega[i] + 0.5 * dt * w1[i];
        }
        rhs(td, tw, stage, sc.machines, d2, w2);
        for (std::size_t i = 0; i < n; ++i) {
            td[i] = delta[i] + 0.5 * dt * d2[i];
            tw[i] = omega[i] + 0.5 * dt * w2[i];
        }
        rhs(td, tw, stage, sc.machines, d3, w3);
        for (std::size_t i = 0; i < n; ++i) {
            td[i] = delta[i] + dt * d3[i];
            tw[i] = omega[i] + dt * w3[i];
        }
        rhs(td, tw, stage, sc.machines, d4, w4);

        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            delta[i] += dt / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
            omega[i] += dt / 6.0 * (w1[i] + 2.0 * w2[i] + 2.0 * w3[i] + w4[i]);
            finite = finite && std::isfinite(delta[i]) && std::isfinite(omega[i]);
        }
        if (!finite) throw SimulationDiverged(static_cast<double>(k) * dt);
        record(k + 1);
    }
    return traj;
}

}  // namespace swingkit
