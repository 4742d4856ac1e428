#pragma once

#include <filesystem>
#include <optional>

#include "swingkit/assess.hpp"
#include "swingkit/swing.hpp"

namespace swingkit {

struct FaultSchedule {
    double t0 = 0.0;
    double tc = 0.0;
    double t_end = 0.0;
    double dt = 1e-3;
};

/// On-disk case: machines, three stage matrices, equilibrium, fault schedule
/// and optional analysis hints. Angles are degrees in the file, radians here.
struct CaseFile {
    int schema_version = 1;
    std::string name;
    double base_mva = 100.0;
    SimCase sim;
    FaultSchedule fault;
    std::vector<MachineId> critical;   // optional; empty = auto-select
    std::vector<MachineId> group_cr;   // optional; empty = critical set
    EventOptions tolerances;
};

struct RunArtifacts {
    std::filesystem::path trajectory_csv;
    std::filesystem::path events_csv;
    std::filesystem::path report_txt;
    std::vector<std::filesystem::path> plots;
};

CaseFile load_case(const std::filesystem::path& path);
void save_case(const CaseFile& c, const std::filesystem::path& path);

struct RunOptions {
    std::filesystem::path out_dir;
    std::optional<AssessmentMode> mode;        // nullopt = simulate only
    std::optional<double> dt_override;
    std::optional<double> t_end_override;
    std::vector<MachineId> critical_override;
    std::vector<MachineId> cr_override;
};

struct RunResult {
    RunArtifacts artifacts;
    SystemTrajectory trajectory;
    std::optional<AssessmentReport> report;
};

/// simulate -> assess -> persist (trajectory.csv, events.csv, report.txt).
RunResult run_case(const CaseFile& c, const RunOptions& opt);

/// Render requested views ("coi", "fdelta", "fdelta:<id>") as SVG files next
/// to the artifacts. Throws ValidationError on an unknown view name.
std::vector<std::filesystem::path> emit_plots(const RunArtifacts& artifacts,
                                              const std::vector<std::string>& views,
                                              const std::filesystem::path& out_dir);

/// Trapezoid re-integration of acceleration/deceleration areas from the
/// emitted CSVs (used to cross-check plotted areas against events.csv).
struct CsvAreas {
    double a_acc = 0.0;
    double a_dec = 0.0;
};
CsvAreas recompute_areas_from_csv(const std::filesystem::path& trajectory_csv,
                                  const std::filesystem::path& events_csv,
                                  const MachineId& machine);

}  // namespace swingkit
