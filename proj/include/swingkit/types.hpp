#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swingkit {

using MachineId = std::string;

/// Input failed structural validation (dimensions, invariants, schema).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite state.
struct SimulationDiverged : std::runtime_error {
    double last_valid_time;
    explicit SimulationDiverged(double t)
        : std::runtime_error("simulation diverged after t = " + std::to_string(t) + " s"),
          last_valid_time(t) {}
};

/// Dense n x n matrix, row-major.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> v;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n_) : n(n_), v(n_ * n_, 0.0) {}

    double operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }
    double& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
};

struct MachineParams {
    MachineId id;
    double inertia = 0.0;       // M, p.u. * s^2
    double mech_power = 0.0;    // Pm, p.u.
    double internal_emf = 1.0;  // E, p.u.
};

enum class StageLabel { Prefault, FaultOn, Postfault };

const char* to_string(StageLabel s);

/// Reduced admittance matrix at machine internal nodes for one network stage.
struct NetworkStage {
    StageLabel label = StageLabel::Prefault;
    SquareMatrix conductance;  // G
    SquareMatrix susceptance;  // B
};

struct SystemSnapshot {
    double time = 0.0;
    std::vector<double> delta;  // rad
    std::vector<double> omega;  // rad/s deviation from synchronous
};

/// Fixed-step trajectory in the synchronous reference.
/// net_force[k][i] = Pm_i - Pe_i evaluated with the stage active at time[k].
struct SystemTrajectory {
    double dt = 0.0;
    double t_fault = 0.0;
    double t_clear = 0.0;
    std::vector<double> time;
    std::vector<std::vector<double>> delta;
    std::vector<std::vector<double>> omega;
    std::vector<std::vector<double>> net_force;

    std::size_t size() const { return time.size(); }
    std::size_t machine_count() const { return delta.empty() ? 0 : delta.front().size(); }

    /// First sample index at or after the clearing time.
    std::size_t clearing_index() const;
};

}  // namespace swingkit
