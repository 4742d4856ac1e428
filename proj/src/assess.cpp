#include "swingkit/assess.hpp"

#include <algorithm>
#include <cmath>

namespace swingkit {

const char* to_string(MachineStatus s) {
    switch (s) {
        case MachineStatus::Stable: return "stable";
        case MachineStatus::Unstable: return "unstable";
        case MachineStatus::Inconclusive: return "inconclusive";
        case MachineStatus::NonCritical: return "non_critical";
    }
    return "?";
}

const char* to_string(SystemStatus s) {
    switch (s) {
        case SystemStatus::Stable: return "stable";
        case SystemStatus::Unstable: return "unstable";
        case SystemStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

MachineVerdict make_verdict(const TwoMachineSeries& series, const EventOptions& opt) {
    MachineVerdict v;
    v.machine = series.objective;
    v.ledger = energy_ledger(series, opt);
    v.event = v.ledger.mpp;
    switch (v.event.kind) {
        case EventKind::Dlp:
            v.status = MachineStatus::Unstable;
            v.margin = v.ledger.residual_energy_form;
            break;
        case EventKind::Dsp:
            v.status = MachineStatus::Stable;
            v.margin = v.ledger.a_dec - v.ledger.a_acc;
            break;
        case EventKind::Inconclusive:
            v.status = v.event.non_disturbed ? MachineStatus::NonCritical
                                             : MachineStatus::Inconclusive;
            break;
    }
    return v;
}

void finalize_report(AssessmentReport& rep) {
    std::stable_sort(rep.verdicts.begin(), rep.verdicts.end(),
                     [](const MachineVerdict& a, const MachineVerdict& b) {
                         const bool ae = a.event.kind != EventKind::Inconclusive;
                         const bool be = b.event.kind != EventKind::Inconclusive;
                         if (ae != be) return ae;
                         if (ae && be) return a.event.time < b.event.time;
                         return false;
                     });

    bool any_unstable = false, any_inconclusive = false;
    rep.unstable_count = 0;
    for (const MachineVerdict& v : rep.verdicts) {
        if (v.status == MachineStatus::Unstable) {
            any_unstable = true;
            ++rep.unstable_count;
            if (!rep.instability_time || v.event.time < *rep.instability_time) {
                rep.instability_time = v.event.time;
            }
        }
        if (v.status == MachineStatus::Inconclusive) any_inconclusive = true;
        if (v.event.kind != EventKind::Inconclusive) {
            if (!rep.severity_time || v.event.time > *rep.severity_time) {
                rep.severity_time = v.event.time;
            }
        }
    }
    if (any_unstable) {
        rep.system_status = SystemStatus::Unstable;
    } else if (any_inconclusive) {
        rep.system_status = SystemStatus::Inconclusive;
    } else {
        rep.system_status = SystemStatus::Stable;
    }
}

}  // namespace

AssessmentReport assess_individual(const SystemTrajectory& traj,
                                   const std::vector<MachineParams>& machines,
                                   const std::vector<std::size_t>& critical,
                                   const EventOptions& opt) {
    if (critical.empty()) throw ValidationError("assess_individual: critical set is empty");
    for (std::size_t i : critical) {
        if (i >= machines.size()) throw ValidationError("assess_individual: index out of range");
    }
    const ReferenceMachine rm = build_machine_sys(traj, machines);

    AssessmentReport rep;
    rep.mode = AssessmentMode::Individual;
    for (std::size_t i : critical) {
        rep.verdicts.push_back(make_verdict(relative_series(traj, machines, i, rm), opt));
    }
    finalize_report(rep);
    return rep;
}

AssessmentReport assess_equivalent(const SystemTrajectory& traj,
                                   const std::vector<MachineParams>& machines,
                                   const GroupSeparation& sep,
                                   const EventOptions& opt) {
    AssessmentReport rep;
    rep.mode = AssessmentMode::Equivalent;
    rep.verdicts.push_back(make_verdict(build_cr_ncr(traj, machines, sep), opt));
    finalize_report(rep);
    // One machine: stability and severity land on the same event.
    rep.severity_time = rep.verdicts.front().event.kind != EventKind::Inconclusive
                            ? std::optional<double>(rep.verdicts.front().event.time)
                            : std::nullopt;
    if (rep.system_status == SystemStatus::Unstable) rep.instability_time = rep.severity_time;
    return rep;
}

std::vector<std::size_t> select_critical(const SystemTrajectory& traj,
                                         const std::vector<MachineParams>& machines,
                                         const CriticalSelectionConfig& cfg) {
    const ReferenceMachine rm = build_machine_sys(traj, machines);
    const std::size_t ic = traj.clearing_index();
    const std::size_t n = machines.size();
    std::vector<double> ke(n);
    double ke_max = 0.0;
    std::size_t top = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = traj.omega[ic][i] - rm.series.omega[ic];
        ke[i] = 0.5 * machines[i].inertia * w * w;
        if (ke[i] > ke_max) {
            ke_max = ke[i];
            top = i;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (ke[i] >= cfg.ke_fraction * ke_max) out.push_back(i);
    }
    if (out.empty()) out.push_back(top);
    return out;
}

}  // namespace swingkit
