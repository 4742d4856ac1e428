#pragma once

#include <optional>
#include <span>

#include "swingkit/types.hpp"

namespace swingkit {

/// Which two-machine expression a series belongs to; selects event naming
/// (IDLP/IDSP vs EDLP/EDSP vs the plain DLP/DSP of the ball model).
enum class Expression { Individual, Equivalent, Ball };

enum class EventKind { Dlp, Dsp, Inconclusive };

const char* event_name(Expression expr, EventKind kind);

struct StabilityEvent {
    EventKind kind = EventKind::Inconclusive;
    Expression expression = Expression::Individual;
    MachineId machine;          // objective machine id, or "CR"
    double time = 0.0;          // linearly interpolated, s
    double delta_rel = 0.0;     // rad at event
    double residual_ke = 0.0;   // p.u. at event (filled by energy_ledger)
    bool non_disturbed = false; // machine skipped: at rest in the RM frame at clearing
};

/// One machine's (or aggregate's) series extracted from a trajectory.
struct MachineSeries {
    MachineId label;
    double inertia = 0.0;
    std::vector<double> delta;
    std::vector<double> omega;
    std::vector<double> power;  // net force P = Pm - Pe
};

enum class RmKind { MachineSys, GroupNcr, GroupCr, ExplicitMachine };

struct ReferenceMachine {
    RmKind kind = RmKind::MachineSys;
    MachineSeries series;
};

/// Relative motion of one objective machine against a reference machine:
///   delta_rel = d_obj - d_RM,  omega_rel = w_obj - w_RM,
///   f = P_obj - (M_obj / M_RM) P_RM
struct TwoMachineSeries {
    MachineId objective;
    RmKind rm_kind = RmKind::MachineSys;
    Expression expression = Expression::Individual;
    double inertia_obj = 0.0;
    std::vector<double> time;
    std::vector<double> delta_rel;
    std::vector<double> omega_rel;
    std::vector<double> force;
    double dt = 0.0;
    double t_clear = 0.0;

    std::size_t size() const { return time.size(); }
    std::size_t clearing_index() const;
};

struct GroupSeparation {
    std::vector<std::size_t> cr;   // machine indices in Group-CR
    std::vector<std::size_t> ncr;  // machine indices in Group-NCR

    void validate(std::size_t machine_count) const;  // disjoint, exhaustive, non-empty
};

struct EventOptions {
    double residual_tol = 1e-6;       // zero tolerances at interpolated events
    double non_disturbed_tol = 1e-9;  // |delta_rel|, |omega_rel| at clearing below this: skip
    double quadrature_tol = 1e-6;     // agreement between the two residual-KE routes
};

/// Energy bookkeeping of one two-machine system (post-fault forces only).
struct EnergyLedger {
    std::vector<double> time;     // from the clearing sample onward
    std::vector<double> ke;       // 0.5 M w_rel^2
    std::vector<double> pe;       // path integral of -f d(delta_rel) from clearing
    double a_acc = 0.0;           // KE at clearing
    double a_dec = 0.0;           // PE gained from clearing to the MPP
    double residual_energy_form = 0.0;  // KE(tc) - dPE(tc -> MPP), via the cumulative PE series
    double residual_area_form = 0.0;    // A_acc - A_dec, direct quadrature between the endpoints
    StabilityEvent mpp;
    bool inconclusive = false;
};

MachineSeries machine_series(const SystemTrajectory& traj,
                             const std::vector<MachineParams>& machines, std::size_t i);

/// Inertia-weighted aggregation of a machine group into one equivalent machine.
MachineSeries aggregate_group(const SystemTrajectory& traj,
                              const std::vector<MachineParams>& machines,
                              std::span<const std::size_t> group);

/// Machine-SYS: the whole-system aggregate used as RM for individual-machine work.
ReferenceMachine build_machine_sys(const SystemTrajectory& traj,
                                   const std::vector<MachineParams>& machines);

TwoMachineSeries relative_series(const SystemTrajectory& traj, const MachineSeries& objective,
                                 const ReferenceMachine& rm, Expression expr);

TwoMachineSeries relative_series(const SystemTrajectory& traj,
                                 const std::vector<MachineParams>& machines,
                                 std::size_t objective, const ReferenceMachine& rm);

/// The one-and-only CR-NCR series for a group separation.
TwoMachineSeries build_cr_ncr(const SystemTrajectory& traj,
                              const std::vector<MachineParams>& machines,
                              const GroupSeparation& sep);

/// Separation of a real machine from its own group's equivalent (COI-CR frame).
TwoMachineSeries inner_group_series(const SystemTrajectory& traj,
                                    const std::vector<MachineParams>& machines,
                                    const GroupSeparation& sep, std::size_t machine);

/// First qualifying DLP/DSP after clearing.
/// DLP: f crosses - to + while the machine still advances; DSP: relative speed
/// crosses + to -. Series are direction-normalized first; DSP wins a shared step.
StabilityEvent detect_events(const TwoMachineSeries& s, const EventOptions& opt = {});

EnergyLedger energy_ledger(const TwoMachineSeries& s, const EventOptions& opt = {});

}  // namespace swingkit
