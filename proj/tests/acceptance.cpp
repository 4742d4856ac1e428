// Acceptance suite: one line per criterion, "PASS"/"FAIL" plus a short
// description. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "swingkit/assess.hpp"
#include "swingkit/basin.hpp"
#include "swingkit/case_io.hpp"

using namespace swingkit;
using namespace swingkit::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Batch {
    std::vector<RandomCase> cases;
    std::vector<SystemTrajectory> trajs;
};

Batch run_batch() {
    Batch b;
    std::mt19937 rng(20260824);
    for (int c = 0; c < 100; ++c) {
        b.cases.push_back(make_random_case(rng));
        const RandomCase& rc = b.cases.back();
        b.trajs.push_back(simulate(rc.sc, rc.t0, rc.tc, rc.t_end, rc.dt));
    }
    return b;
}

// ---------------------------------------------------------------------------
// 1. NEC == EAC: the two residual-KE routes agree on randomized machine cases
//    and on the ball model.
bool criterion_energy_identity(const Batch& batch) {
    const auto t0 = Clock::now();
    int checked = 0;
    double worst = 0.0;
    for (std::size_t c = 0; c < batch.cases.size(); ++c) {
        const RandomCase& rc = batch.cases[c];
        const SystemTrajectory& traj = batch.trajs[c];
        const ReferenceMachine rm = build_machine_sys(traj, rc.sc.machines);
        for (std::size_t i = 0; i < rc.sc.machine_count(); ++i) {
            const EnergyLedger led = energy_ledger(relative_series(traj, rc.sc.machines, i, rm));
            if (led.inconclusive) continue;
            worst = std::max(worst,
                             std::abs(led.residual_energy_form - led.residual_area_form));
            ++checked;
        }
    }

    const BasinProfile p = default_profile(9.81, 1.0);
    const double vb = std::sqrt(2.0 * ball_energy({p.h_boundary, 0.0, 1.0}, p).pe);
    int ball_checked = 0;
    for (double scale = 0.2; scale <= 1.6; scale += 0.1) {
        const BallTrajectory bt = simulate_ball(p, {0.0, scale * vb, 1.0}, 10.0, 1e-3);
        const BallEac eac = ball_eac(bt, p);
        if (eac.inconclusive) continue;
        worst = std::max(worst, std::abs(eac.residual_energy_form - eac.residual_area_form));
        ++ball_checked;
    }

    const double elapsed = seconds_since(t0);
    std::printf("         (%d machine ledgers + %d ball cases, worst gap %.3e p.u., %.1f s)\n",
                checked, ball_checked, worst, elapsed);
    return checked >= 200 && ball_checked >= 10 && worst < 1e-6 && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// 2. SMIB: bisection on the simulator vs the analytic critical clearing time.
bool criterion_smib_oracle() {
    const auto t0 = Clock::now();
    const double pm = 1.0, pmax = 2.0, dt = 1e-3;
    Smib s = make_smib(pm, pmax, 0.0, pmax);

    auto is_stable = [&](long k) {
        const double tc = static_cast<double>(k) * dt;
        const auto traj = simulate(s.sc, 0.0, tc, tc + 5.0, dt);
        ReferenceMachine bus;
        bus.kind = RmKind::ExplicitMachine;
        bus.series = machine_series(traj, s.sc.machines, 1);
        const StabilityEvent ev = detect_events(relative_series(traj, s.sc.machines, 0, bus));
        return ev.kind == EventKind::Dsp;
    };

    long lo = 1, hi = 1000;  // lo stable, hi unstable
    if (!is_stable(lo) || is_stable(hi)) return false;
    while (hi - lo > 1) {
        const long mid = (lo + hi) / 2;
        (is_stable(mid) ? lo : hi) = mid;
    }
    const double t_sim = static_cast<double>(lo) * dt;  // last stable grid clearing time
    const double t_ana = smib_critical_time(pm, pmax, s.sc.machines[0].inertia);
    const double gap = std::abs(t_sim - t_ana);
    const double elapsed = seconds_since(t0);
    std::printf("         (bisection %.3f s vs analytic %.6f s, gap %.2e s, %.1f s)\n",
                t_sim, t_ana, gap, elapsed);
    return gap <= 1e-3 + 1e-12 && elapsed < 5.0;
}

// ---------------------------------------------------------------------------
// 3. COI sums vanish at every sample of every bundled case.
bool criterion_coi_invariants() {
    double worst = 0.0;
    for (const char* name : {"wscc3.json", "ne10.json"}) {
        const CaseFile c = load_case(data_path(name));
        const auto traj = simulate(c.sim, c.fault.t0, c.fault.tc, c.fault.t_end, c.fault.dt);
        const ReferenceMachine rm = build_machine_sys(traj, c.sim.machines);
        for (std::size_t k = 0; k < traj.size(); ++k) {
            double sd = 0.0, sw = 0.0;
            for (std::size_t i = 0; i < c.sim.machine_count(); ++i) {
                sd += c.sim.machines[i].inertia * (traj.delta[k][i] - rm.series.delta[k]);
                sw += c.sim.machines[i].inertia * (traj.omega[k][i] - rm.series.omega[k]);
            }
            worst = std::max(worst, std::max(std::abs(sd), std::abs(sw)));
        }
    }
    std::printf("         (worst COI sum %.3e)\n", worst);
    return worst < 1e-9;
}

// ---------------------------------------------------------------------------
// 4. DLP verdict <=> the relative angle later exceeds 2 pi, DLP strictly first.
bool criterion_dlp_divergence(const Batch& batch) {
    int disagreements = 0, dlp_count = 0;
    bool order_ok = true;
    for (std::size_t c = 0; c < batch.cases.size(); ++c) {
        const RandomCase& rc = batch.cases[c];
        const SystemTrajectory& traj = batch.trajs[c];
        const ReferenceMachine rm = build_machine_sys(traj, rc.sc.machines);
        // the equivalence is a statement about disturbed machines: restrict to
        // the clearing-KE critical set, as the assessment itself does
        for (std::size_t i : select_critical(traj, rc.sc.machines)) {
            const TwoMachineSeries rel = relative_series(traj, rc.sc.machines, i, rm);
            const StabilityEvent ev = detect_events(rel);
            double t_cross = -1.0;
            for (std::size_t k = rel.clearing_index(); k < rel.size(); ++k) {
                if (std::abs(rel.delta_rel[k]) > 2.0 * M_PI) {
                    t_cross = rel.time[k];
                    break;
                }
            }
            const bool dlp = ev.kind == EventKind::Dlp;
            if (dlp != (t_cross >= 0.0)) {
                ++disagreements;
                double peak = 0.0;
                for (std::size_t k = rel.clearing_index(); k < rel.size(); ++k) {
                    peak = std::max(peak, std::abs(rel.delta_rel[k]));
                }
                std::printf("         disagreement: case %zu machine %zu verdict %s "
                            "t_cross %.3f peak %.3f rad\n",
                            c, i, event_name(ev.expression, ev.kind), t_cross, peak);
                continue;
            }
            if (dlp) {
                ++dlp_count;
                if (!(ev.time < t_cross)) {
                    order_ok = false;
                    std::printf("         order violation: case %zu machine %zu DLP %.3f "
                                "t_cross %.3f\n", c, i, ev.time, t_cross);
                }
            }
        }
    }
    std::printf("         (%d DLP machines, %d disagreements)\n", dlp_count, disagreements);
    return disagreements == 0 && order_ok && dlp_count > 0;
}

// ---------------------------------------------------------------------------
// 5. Ten-machine event structure: two IDLPs around one IDSP, and the EDLP of
//    the unstable pair inside the IDLP bracket.
bool criterion_event_structure() {
    const CaseFile c = load_case(data_path("ne10.json"));
    const auto traj = simulate(c.sim, c.fault.t0, c.fault.tc, c.fault.t_end, c.fault.dt);

    std::vector<std::size_t> critical;
    for (const auto& id : c.critical) critical.push_back(c.sim.index_of(id));
    if (critical.size() != 3) return false;
    const AssessmentReport ind = assess_individual(traj, c.sim.machines, critical);

    std::vector<double> dlp_times;
    double dsp_time = -1.0;
    for (const MachineVerdict& v : ind.verdicts) {
        if (v.status == MachineStatus::Unstable) dlp_times.push_back(v.event.time);
        if (v.status == MachineStatus::Stable) dsp_time = v.event.time;
    }
    if (dlp_times.size() != 2 || dsp_time < 0.0) return false;
    const double first = std::min(dlp_times[0], dlp_times[1]);
    const double last = std::max(dlp_times[0], dlp_times[1]);
    const bool interleaved = first < dsp_time && dsp_time < last;
    const bool timeline = ind.instability_time && ind.severity_time &&
                          *ind.instability_time < *ind.severity_time &&
                          *ind.instability_time == first;

    GroupSeparation sep;
    for (const auto& id : c.group_cr) sep.cr.push_back(c.sim.index_of(id));
    for (std::size_t i = 0; i < c.sim.machine_count(); ++i) {
        bool in_cr = false;
        for (std::size_t j : sep.cr) in_cr = in_cr || j == i;
        if (!in_cr) sep.ncr.push_back(i);
    }
    const AssessmentReport eq = assess_equivalent(traj, c.sim.machines, sep);
    const bool edlp_ok = eq.verdicts.size() == 1 &&
                         eq.verdicts.front().event.kind == EventKind::Dlp &&
                         eq.verdicts.front().event.time >= first &&
                         eq.verdicts.front().event.time <= last;

    std::printf("         (IDLPs %.3f/%.3f s, IDSP %.3f s, EDLP %.3f s)\n", first, last, dsp_time,
                eq.verdicts.empty() ? -1.0 : eq.verdicts.front().event.time);
    return interleaved && timeline && edlp_ok;
}

// ---------------------------------------------------------------------------
// 6. Ball barrier: the verdict flips within 0.1% of the barrier launch speed.
bool criterion_ball_barrier() {
    const BasinProfile p = default_profile(9.81, 1.0);
    const double vb = std::sqrt(2.0 * ball_energy({p.h_boundary, 0.0, 1.0}, p).pe);
    const BallTrajectory below = simulate_ball(p, {0.0, 0.999 * vb, 1.0}, 60.0, 1e-4);
    const BallTrajectory above = simulate_ball(p, {0.0, 1.001 * vb, 1.0}, 60.0, 1e-4);
    const StabilityEvent eb = classify_ball(below, p);
    const StabilityEvent ea = classify_ball(above, p);
    std::printf("         (v* = %.6f m/s: -0.1%% -> %s, +0.1%% -> %s)\n", vb,
                event_name(eb.expression, eb.kind), event_name(ea.expression, ea.kind));
    return eb.kind == EventKind::Dsp && ea.kind == EventKind::Dlp;
}

// ---------------------------------------------------------------------------
// 7. Degenerate suite: equilibrium persistence, singleton aggregation,
//    CR/NCR swap antisymmetry.
bool criterion_degenerate() {
    // equilibrium persistence, 5 s, < 1e-9 rad drift
    const CaseFile c = load_case(data_path("wscc3.json"));
    const auto still = simulate(c.sim, 5.0, 5.0, 5.0, 1e-3);
    double drift = 0.0;
    for (std::size_t k = 0; k < still.size(); ++k) {
        for (std::size_t i = 0; i < c.sim.machine_count(); ++i) {
            drift = std::max(drift, std::abs(still.delta[k][i] - c.sim.initial.delta[i]));
        }
    }
    if (drift >= 1e-9) {
        std::printf("         (equilibrium drift %.3e rad)\n", drift);
        return false;
    }

    // singleton aggregation is bitwise identical to the machine series
    const auto traj = simulate(c.sim, c.fault.t0, c.fault.tc, 1.0, c.fault.dt);
    const std::vector<std::size_t> one = {2};
    const MachineSeries lone = aggregate_group(traj, c.sim.machines, one);
    const MachineSeries direct = machine_series(traj, c.sim.machines, 2);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (lone.delta[k] != direct.delta[k] || lone.omega[k] != direct.omega[k] ||
            lone.power[k] != direct.power[k]) {
            std::printf("         (singleton aggregation mismatch at sample %zu)\n", k);
            return false;
        }
    }

    // CR/NCR swap: relative state negates exactly, force scales by -M_NCR/M_CR
    GroupSeparation sep, swapped;
    sep.cr = {0};
    sep.ncr = {1, 2};
    swapped.cr = sep.ncr;
    swapped.ncr = sep.cr;
    const TwoMachineSeries a = build_cr_ncr(traj, c.sim.machines, sep);
    const TwoMachineSeries b = build_cr_ncr(traj, c.sim.machines, swapped);
    const double ratio = b.inertia_obj / a.inertia_obj;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (b.delta_rel[k] != -a.delta_rel[k] || b.omega_rel[k] != -a.omega_rel[k]) {
            std::printf("         (swap antisymmetry violated at sample %zu)\n", k);
            return false;
        }
        if (std::abs(b.force[k] + ratio * a.force[k]) >
            1e-12 * std::max(1.0, std::abs(b.force[k]))) {
            std::printf("         (swap force scaling violated at sample %zu)\n", k);
            return false;
        }
    }
    std::printf("         (drift %.3e rad; identities exact)\n", drift);
    return true;
}

// ---------------------------------------------------------------------------
// 8. Determinism: byte-identical artifacts across repeated runs.
bool criterion_determinism() {
    for (const char* name : {"wscc3.json", "ne10.json"}) {
        const CaseFile c = load_case(data_path(name));
        const fs::path base = fs::temp_directory_path() / "swingkit_acceptance";
        RunOptions a, b;
        a.out_dir = base / (std::string(name) + "_a");
        b.out_dir = base / (std::string(name) + "_b");
        a.mode = b.mode = AssessmentMode::Individual;
        fs::remove_all(a.out_dir);
        fs::remove_all(b.out_dir);
        const RunResult ra = run_case(c, a);
        const RunResult rb = run_case(c, b);
        if (slurp(ra.artifacts.trajectory_csv) != slurp(rb.artifacts.trajectory_csv) ||
            slurp(ra.artifacts.events_csv) != slurp(rb.artifacts.events_csv) ||
            slurp(ra.artifacts.report_txt) != slurp(rb.artifacts.report_txt)) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](int num, const char* desc, bool ok) {
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", num, desc);
        std::fflush(stdout);
        if (!ok) ++failed;
    };

    try {
        const Batch batch = run_batch();
        report(1, "NEC==EAC residual-KE identity on randomized cases and the ball model",
               criterion_energy_identity(batch));
        report(2, "SMIB bisection matches the analytic critical clearing time",
               criterion_smib_oracle());
        report(3, "COI inertia-weighted sums vanish on all bundled cases",
               criterion_coi_invariants());
        report(4, "DLP verdicts coincide with (and precede) 2-pi divergence",
               criterion_dlp_divergence(batch));
        report(5, "ten-machine event structure: IDLP/IDSP interleaving and bracketed EDLP",
               criterion_event_structure());
        report(6, "ball classification flips within 0.1% of the barrier speed",
               criterion_ball_barrier());
        report(7, "degenerate suite: equilibrium persistence, singleton identity, CR/NCR swap",
               criterion_degenerate());
        report(8, "byte-identical artifacts across repeated runs", criterion_determinism());
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance suite aborted: %s\n", e.what());
        return 99;
    }
    return failed;
}
