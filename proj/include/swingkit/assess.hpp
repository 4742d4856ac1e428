#pragma once

#include <optional>

#include "swingkit/paradigm.hpp"

namespace swingkit {

enum class MachineStatus { Stable, Unstable, Inconclusive, NonCritical };
enum class SystemStatus { Stable, Unstable, Inconclusive };

const char* to_string(MachineStatus s);
const char* to_string(SystemStatus s);

struct MachineVerdict {
    MachineId machine;
    MachineStatus status = MachineStatus::Inconclusive;
    StabilityEvent event;
    EnergyLedger ledger;
    /// Unstable: residual KE at the DLP (> 0). Stable: A_dec surplus proxy
    /// (decelerating area to the DSP minus A_acc).
    double margin = 0.0;
};

enum class AssessmentMode { Individual, Equivalent };

struct AssessmentReport {
    AssessmentMode mode = AssessmentMode::Individual;
    std::vector<MachineVerdict> verdicts;  // ordered by event time
    SystemStatus system_status = SystemStatus::Inconclusive;
    std::optional<double> instability_time;  // first DLP
    std::optional<double> severity_time;     // last critical-machine event
    int unstable_count = 0;
};

struct CriticalSelectionConfig {
    /// Machines whose COI-frame clearing KE reaches this fraction of the
    /// per-machine maximum are critical.
    double ke_fraction = 0.10;
};

/// Machine-by-machine assessment against Machine-SYS (unity principles I/II).
AssessmentReport assess_individual(const SystemTrajectory& traj,
                                   const std::vector<MachineParams>& machines,
                                   const std::vector<std::size_t>& critical,
                                   const EventOptions& opt = {});

/// One-and-only CR-NCR assessment; stability and severity land on the same event.
AssessmentReport assess_equivalent(const SystemTrajectory& traj,
                                   const std::vector<MachineParams>& machines,
                                   const GroupSeparation& sep,
                                   const EventOptions& opt = {});

/// Clearing-KE ranking in the COI-SYS frame; never returns an empty set.
std::vector<std::size_t> select_critical(const SystemTrajectory& traj,
                                         const std::vector<MachineParams>& machines,
                                         const CriticalSelectionConfig& cfg = {});

}  // namespace swingkit
