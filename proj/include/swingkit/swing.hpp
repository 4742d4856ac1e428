#pragma once

#include "swingkit/types.hpp"

namespace swingkit {

/// Machine set, the three network stages and the pre-fault equilibrium.
struct SimCase {
    std::vector<MachineParams> machines;
    NetworkStage prefault;
    NetworkStage fault_on;
    NetworkStage postfault;
    SystemSnapshot initial;

    std::size_t machine_count() const { return machines.size(); }
    std::size_t index_of(const MachineId& id) const;  // throws ValidationError if unknown
};

/// Classical-model electrical power at machine internal nodes:
///   Pe_i = E_i^2 G_ii + sum_{j != i} E_i E_j (G_ij cos d_ij + B_ij sin d_ij)
std::vector<double> electrical_power(const std::vector<double>& delta,
                                     const NetworkStage& stage,
                                     const std::vector<MachineParams>& machines);

/// Swing-equation right-hand side: d(delta)/dt = omega, d(omega_i)/dt = (Pm_i - Pe_i)/M_i.
void derivatives(const SystemSnapshot& snap, const NetworkStage& stage,
                 const std::vector<MachineParams>& machines,
                 std::vector<double>& ddelta, std::vector<double>& domega);

/// max_i |Pm_i - Pe_i(delta0)| on the pre-fault network.
double equilibrium_residual(const SimCase& sc);

/// Fixed-step RK4 through pre-fault, fault-on and post-fault stages.
/// t0 and tc snap to the integration grid; throws SimulationDiverged on overflow.
SystemTrajectory simulate(const SimCase& sc, double t0, double tc, double t_end, double dt);

}  // namespace swingkit
