#include "swingkit/paradigm.hpp"

#include <algorithm>
#include <cmath>

namespace swingkit {

const char* event_name(Expression expr, EventKind kind) {
    switch (kind) {
        case EventKind::Dlp:
            return expr == Expression::Individual ? "IDLP"
                 : expr == Expression::Equivalent ? "EDLP" : "DLP";
        case EventKind::Dsp:
            return expr == Expression::Individual ? "IDSP"
                 : expr == Expression::Equivalent ? "EDSP" : "DSP";
        case EventKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::size_t TwoMachineSeries::clearing_index() const {
    for (std::size_t k = 0; k < time.size(); ++k) {
        if (time[k] >= t_clear - 1e-12) return k;
    }
    return time.empty() ? 0 : time.size() - 1;
}

void GroupSeparation::validate(std::size_t machine_count) const {
    if (cr.empty() || ncr.empty()) throw ValidationError("group separation: both groups must be non-empty");
    std::vector<bool> seen(machine_count, false);
    for (std::size_t i : cr) {
        if (i >= machine_count) throw ValidationError("group separation: index out of range");
        if (seen[i]) throw ValidationError("group separation: duplicate machine");
        seen[i] = true;
    }
    for (std::size_t j : ncr) {
        if (j >= machine_count) throw ValidationError("group separation: index out of range");
        if (seen[j]) throw ValidationError("group separation: groups are not disjoint");
        seen[j] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw ValidationError("group separation: groups do not cover all machines");
    }
}

MachineSeries machine_series(const SystemTrajectory& traj,
                             const std::vector<MachineParams>& machines, std::size_t i) {
    if (i >= machines.size()) throw ValidationError("machine index out of range");
    MachineSeries s;
    s.label = machines[i].id;
    s.inertia = machines[i].inertia;
    const std::size_t m = traj.size();
    s.delta.resize(m);
    s.omega.resize(m);
    s.power.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        s.delta[k] = traj.delta[k][i];
        s.omega[k] = traj.omega[k][i];
        s.power[k] = traj.net_force[k][i];
    }
    return s;
}

MachineSeries aggregate_group(const SystemTrajectory& traj,
                              const std::vector<MachineParams>& machines,
                              std::span<const std::size_t> group) {
    if (group.empty()) throw ValidationError("aggregate_group: empty group");
    double m_total = 0.0;
    for (std::size_t i : group) {
        if (i >= machines.size()) throw ValidationError("aggregate_group: index out of range");
        m_total += machines[i].inertia;
    }
    if (group.size() == 1) {
        // Keep the singleton identity exact: no weighted round trip.
        return machine_series(traj, machines, group.front());
    }
    MachineSeries s;
    s.inertia = m_total;
    const std::size_t m = traj.size();
    s.delta.assign(m, 0.0);
    s.omega.assign(m, 0.0);
    s.power.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double d = 0.0, w = 0.0, p = 0.0;
        for (std::size_t i : group) {
            d += machines[i].inertia * traj.delta[k][i];
            w += machines[i].inertia * traj.omega[k][i];
            p += traj.net_force[k][i];
        }
        s.delta[k] = d / m_total;
        s.omega[k] = w / m_total;
        s.power[k] = p;
    }
    return s;
}

ReferenceMachine build_machine_sys(const SystemTrajectory& traj,
                                   const std::vector<MachineParams>& machines) {
    if (traj.size() == 0) throw ValidationError("build_machine_sys: empty trajectory");
    std::vector<std::size_t> all(machines.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    ReferenceMachine rm;
    rm.kind = RmKind::MachineSys;
    rm.series = aggregate_group(traj, machines, all);
    rm.series.label = "SYS";
    return rm;
}

TwoMachineSeries relative_series(const SystemTrajectory& traj, const MachineSeries& objective,
                                 const ReferenceMachine& rm, Expression expr) {
    const std::size_t m = traj.size();
    if (objective.delta.size() != m || rm.series.delta.size() != m) {
        throw ValidationError("relative_series: series length mismatch");
    }
    TwoMachineSeries s;
    s.objective = objective.label;
    s.rm_kind = rm.kind;
    s.expression = expr;
    s.inertia_obj = objective.inertia;
    s.dt = traj.dt;
    s.t_clear = traj.t_clear;
    s.time = traj.time;
    s.delta_rel.resize(m);
    s.omega_rel.resize(m);
    s.force.resize(m);
    const double ratio = objective.inertia / rm.series.inertia;
    for (std::size_t k = 0; k < m; ++k) {
        s.delta_rel[k] = objective.delta[k] - rm.series.delta[k];
        s.omega_rel[k] = objective.omega[k] - rm.series.omega[k];
        s.force[k] = objective.power[k] - ratio * rm.series.power[k];
    }
    return s;
}

TwoMachineSeries relative_series(const SystemTrajectory& traj,
                                 const std::vector<MachineParams>& machines,
                                 std::size_t objective, const ReferenceMachine& rm) {
    return relative_series(traj, machine_series(traj, machines, objective), rm,
                           Expression::Individual);
}

TwoMachineSeries build_cr_ncr(const SystemTrajectory& traj,
                              const std::vector<MachineParams>& machines,
                              const GroupSeparation& sep) {
    sep.validate(machines.size());
    MachineSeries cr = aggregate_group(traj, machines, sep.cr);
    cr.label = "CR";
    ReferenceMachine ncr;
    ncr.kind = RmKind::GroupNcr;
    ncr.series = aggregate_group(traj, machines, sep.ncr);
    ncr.series.label = "NCR";
    return relative_series(traj, cr, ncr, Expression::Equivalent);
}

TwoMachineSeries inner_group_series(const SystemTrajectory& traj,
                                    const std::vector<MachineParams>& machines,
                                    const GroupSeparation& sep, std::size_t machine) {
    sep.validate(machines.size());
    if (std::find(sep.cr.begin(), sep.cr.end(), machine) == sep.cr.end()) {
        throw ValidationError("inner_group_series: machine is not in Group-CR");
    }
    ReferenceMachine rm;
    rm.kind = RmKind::GroupCr;
    rm.series = aggregate_group(traj, machines, sep.cr);
    rm.series.label = "CR";
    return relative_series(traj, machine_series(traj, machines, machine), rm,
                           Expression::Individual);
}

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

StabilityEvent detect_events(const TwoMachineSeries& s, const EventOptions& opt) {
    StabilityEvent ev;
    ev.expression = s.expression;
    ev.machine = s.objective;
    if (s.size() < 2) return ev;

    const std::size_t ic = s.clearing_index();
    if (std::abs(s.delta_rel[ic]) < opt.non_disturbed_tol &&
        std::abs(s.omega_rel[ic]) < opt.non_disturbed_tol) {
        ev.non_disturbed = true;
        return ev;
    }

    // Direction normalization: analyze the series in the machine's advance
    // direction so that forward motion has positive relative speed.
    double dir;
    if (std::abs(s.omega_rel[ic]) >= opt.non_disturbed_tol) {
        dir = sign_of(s.omega_rel[ic]);
    } else if (std::abs(s.force[ic]) >= opt.non_disturbed_tol) {
        dir = sign_of(s.force[ic]);
    } else {
        dir = sign_of(s.delta_rel[ic]);
    }

    bool force_went_negative = false;
    bool speed_stayed_positive = true;
    for (std::size_t k = ic; k + 1 < s.size(); ++k) {
        const double w0 = dir * s.omega_rel[k];
        const double w1 = dir * s.omega_rel[k + 1];
        const double f0 = dir * s.force[k];
        const double f1 = dir * s.force[k + 1];
        if (f0 < 0.0) force_went_negative = true;
        if (w0 <= 0.0) speed_stayed_positive = false;

        // DSP: relative speed crosses from positive to non-positive.
        if (w0 > 0.0 && w1 <= 0.0) {
            const double frac = w0 / (w0 - w1);
            ev.kind = EventKind::Dsp;
            ev.time = s.time[k] + frac * s.dt;
            ev.delta_rel = s.delta_rel[k] + frac * (s.delta_rel[k + 1] - s.delta_rel[k]);
            return ev;
        }
        // DLP: interaction force crosses from negative to non-negative while
        // the machine still advances.
        if (f0 < 0.0 && f1 >= 0.0) {
            const double frac = f0 / (f0 - f1);
            const double w_at = w0 + frac * (w1 - w0);
            if (w_at > 0.0) {
                ev.kind = EventKind::Dlp;
                ev.time = s.time[k] + frac * s.dt;
                ev.delta_rel = s.delta_rel[k] + frac * (s.delta_rel[k + 1] - s.delta_rel[k]);
                return ev;
            }
        }
    }

    // Monotone run-away: the force never turned decelerating after clearing
    // and the machine advanced through the whole horizon. The liberation is
    // already in effect at the clearing point.
    if (!force_went_negative && speed_stayed_positive && dir * s.force[ic] >= 0.0) {
        ev.kind = EventKind::Dlp;
        ev.time = s.time[ic];
        ev.delta_rel = s.delta_rel[ic];
        return ev;
    }
    return ev;
}

EnergyLedger energy_ledger(const TwoMachineSeries& s, const EventOptions& opt) {
    EnergyLedger led;
    led.mpp = detect_events(s, opt);
    if (s.size() < 2) {
        led.inconclusive = true;
        return led;
    }

    const std::size_t ic = s.clearing_index();
    const std::size_t m = s.size();
    led.time.assign(s.time.begin() + static_cast<std::ptrdiff_t>(ic), s.time.end());
    led.ke.resize(m - ic);
    led.pe.resize(m - ic);
    for (std::size_t k = ic; k < m; ++k) {
        led.ke[k - ic] = 0.5 * s.inertia_obj * s.omega_rel[k] * s.omega_rel[k];
    }
    led.pe[0] = 0.0;
    for (std::size_t k = ic; k + 1 < m; ++k) {
        const double seg = -0.5 * (s.force[k] + s.force[k + 1]) *
                           (s.delta_rel[k + 1] - s.delta_rel[k]);
        led.pe[k - ic + 1] = led.pe[k - ic] + seg;
    }
    led.a_acc = led.ke[0];

    if (led.mpp.kind == EventKind::Inconclusive) {
        led.inconclusive = true;
        led.a_dec = led.pe.back();
        led.residual_energy_form = led.a_acc - led.a_dec;
        led.residual_area_form = led.residual_energy_form;
        return led;
    }

    // Locate the event's bracketing segment and the interpolated end point.
    std::size_t ke_idx = ic;
    while (ke_idx + 1 < m && s.time[ke_idx + 1] <= led.mpp.time + 1e-15) ++ke_idx;
    if (ke_idx + 1 >= m) ke_idx = m - 2;
    const double frac = std::clamp((led.mpp.time - s.time[ke_idx]) / s.dt, 0.0, 1.0);
    const double delta_ev = s.delta_rel[ke_idx] + frac * (s.delta_rel[ke_idx + 1] - s.delta_rel[ke_idx]);
    const double force_ev = s.force[ke_idx] + frac * (s.force[ke_idx + 1] - s.force[ke_idx]);

    // Route one (energy form): clearing KE minus the PE rise read off the
    // cumulative series, with a trapezoid partial segment to the event point.
    const double pe_partial = -0.5 * (s.force[ke_idx] + force_ev) * (delta_ev - s.delta_rel[ke_idx]);
    const double dpe = led.pe[ke_idx - ic] + pe_partial;
    led.residual_energy_form = led.a_acc - dpe;

    // Route two (area form): the deceleration area re-integrated backwards
    // from the MPP to the clearing point.
    double a_dec = -0.5 * (force_ev + s.force[ke_idx]) * (delta_ev - s.delta_rel[ke_idx]);
    for (std::size_t k = ke_idx; k > ic; --k) {
        a_dec += -0.5 * (s.force[k] + s.force[k - 1]) * (s.delta_rel[k] - s.delta_rel[k - 1]);
    }
    led.a_dec = a_dec;
    led.residual_area_form = led.a_acc - led.a_dec;

    led.mpp.residual_ke = led.residual_energy_form;
    return led;
}

}  // namespace swingkit
