#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "swingkit/basin.hpp"
#include "swingkit/case_io.hpp"

namespace fs = std::filesystem;
using namespace swingkit;

namespace {

fs::path default_out_dir() {
    if (const char* env = std::getenv("SWINGKIT_OUT_DIR")) return fs::path(env);
    return fs::path("swingkit-out");
}

int exit_code_for(const AssessmentReport& rep) {
    return rep.system_status == SystemStatus::Inconclusive ? 2 : 0;
}

void print_report_file(const fs::path& report) {
    std::ifstream in(report);
    std::cout << in.rdbuf();
}

std::vector<MachineId> split_ids(const std::string& csv) {
    std::vector<MachineId> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct CommonOpts {
    std::string case_path;
    std::string out_dir = default_out_dir().string();
    double dt = 0.0;
    double t_end = 0.0;

    void fill(RunOptions& ro) const {
        ro.out_dir = out_dir;
        if (dt > 0.0) ro.dt_override = dt;
        if (t_end > 0.0) ro.t_end_override = t_end;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("case", o.case_path, "case file (JSON)")->required();
    cmd->add_option("-o,--out", o.out_dir, "output directory");
    cmd->add_option("--dt", o.dt, "integration step override [s]");
    cmd->add_option("--t-end", o.t_end, "simulation horizon override [s]");
}

int cmd_simulate(const CommonOpts& o) {
    RunOptions ro;
    o.fill(ro);
    const RunResult res = run_case(load_case(o.case_path), ro);
    std::cout << "wrote " << res.artifacts.trajectory_csv.string() << "\n";
    return 0;
}

int cmd_assess(const CommonOpts& o, const std::string& mode, const std::string& critical,
               const std::string& cr, bool with_plots) {
    RunOptions ro;
    o.fill(ro);
    if (mode == "individual") {
        ro.mode = AssessmentMode::Individual;
    } else if (mode == "equivalent") {
        ro.mode = AssessmentMode::Equivalent;
    } else {
        throw ValidationError("unknown mode: " + mode);
    }
    ro.critical_override = split_ids(critical);
    ro.cr_override = split_ids(cr);

    const RunResult res = run_case(load_case(o.case_path), ro);
    print_report_file(res.artifacts.report_txt);
    if (with_plots) {
        for (const fs::path& p : emit_plots(res.artifacts, {"coi", "fdelta"}, ro.out_dir)) {
            std::cout << "wrote " << p.string() << "\n";
        }
    }
    return exit_code_for(*res.report);
}

int cmd_toy(double g, double h_peak, double mass, double launch, double dt, double t_end,
            const std::string& out_dir) {
    const BasinProfile profile = default_profile(g, h_peak);
    BallState initial;
    initial.altitude = profile.h_bottom;
    initial.velocity = launch;
    initial.mass = mass;
    const BallTrajectory traj = simulate_ball(profile, initial, t_end, dt);
    const BallEac eac = ball_eac(traj, profile, 0.0);

    fs::create_directories(out_dir);
    const fs::path traj_csv = fs::path(out_dir) / "ball_trajectory.csv";
    {
        std::ofstream out(traj_csv);
        out << "time_s,altitude_m,velocity_mps,ke_j,pe_j,te_j\n";
        char buf[160];
        // accumulate PE segment by segment; re-quadrature from the bottom at
        // every sample would be quadratic in the trajectory length
        double pe = ball_energy({traj.altitude[0], 0.0, traj.mass}, profile).pe;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            if (k > 0) {
                pe += -0.5 * (profile.gravity(traj.altitude[k - 1]) +
                              profile.gravity(traj.altitude[k])) *
                      (traj.altitude[k] - traj.altitude[k - 1]);
            }
            const double ke = 0.5 * traj.mass * traj.velocity[k] * traj.velocity[k];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.time[k],
                          traj.altitude[k], traj.velocity[k], ke, pe, ke + pe);
            out << buf;
        }
    }
    const fs::path eac_csv = fs::path(out_dir) / "ball_eac.csv";
    {
        std::ofstream out(eac_csv);
        out << "kind,time_s,altitude_m,a_acc_j,a_dec_j,residual_energy_j,residual_area_j\n";
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      event_name(Expression::Ball, eac.mpp.kind), eac.mpp.time, eac.mpp.delta_rel,
                      eac.a_acc, eac.a_dec, eac.residual_energy_form, eac.residual_area_form);
        out << buf;
    }
    std::cout << "ball launch " << launch << " m/s -> "
              << event_name(Expression::Ball, eac.mpp.kind);
    if (eac.mpp.kind != EventKind::Inconclusive) {
        std::cout << " at t=" << eac.mpp.time << " s, h=" << eac.mpp.delta_rel
                  << " m, residual KE=" << eac.residual_energy_form << " J";
    }
    std::cout << "\nwrote " << traj_csv.string() << "\nwrote " << eac_csv.string() << "\n";
    return eac.mpp.kind == EventKind::Inconclusive ? 2 : 0;
}

int cmd_plot(const std::string& artifact_dir, const std::string& views_csv,
             const std::string& out_dir) {
    RunArtifacts artifacts;
    artifacts.trajectory_csv = fs::path(artifact_dir) / "trajectory.csv";
    artifacts.events_csv = fs::path(artifact_dir) / "events.csv";
    std::vector<std::string> views;
    for (const MachineId& v : split_ids(views_csv)) views.push_back(v);
    const fs::path out = out_dir.empty() ? fs::path(artifact_dir) : fs::path(out_dir);
    for (const fs::path& p : emit_plots(artifacts, views, out)) {
        std::cout << "wrote " << p.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transient stability assessment toolkit"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "integrate a case and write trajectory.csv");
    add_common(sim, sim_opts);

    CommonOpts assess_opts;
    std::string mode = "individual", critical_csv, cr_csv;
    bool with_plots = false;
    CLI::App* assess = app.add_subcommand("assess", "simulate and assess stability");
    add_common(assess, assess_opts);
    assess->add_option("-m,--mode", mode, "individual | equivalent");
    assess->add_option("--critical", critical_csv, "comma-separated critical machine ids");
    assess->add_option("--cr", cr_csv, "comma-separated Group-CR machine ids");
    assess->add_flag("--plots", with_plots, "also emit coi and fdelta SVG views");

    double g = 9.81, h_peak = 1.0, mass = 1.0, launch = 5.0, toy_dt = 1e-4, toy_t_end = 20.0;
    std::string toy_out = default_out_dir().string();
    CLI::App* toy = app.add_subcommand("toy", "ball-in-basin demo");
    toy->add_option("--g", g, "gravity magnitude [m/s^2]");
    toy->add_option("--h-peak", h_peak, "basin half-height parameter [m]");
    toy->add_option("--mass", mass, "ball mass [kg]");
    toy->add_option("--launch-speed", launch, "launch speed at the basin bottom [m/s]");
    toy->add_option("--dt", toy_dt, "integration step [s]");
    toy->add_option("--t-end", toy_t_end, "horizon [s]");
    toy->add_option("-o,--out", toy_out, "output directory");

    std::string plot_dir, plot_views = "coi,fdelta", plot_out;
    CLI::App* plot = app.add_subcommand("plot", "render SVG views from run artifacts");
    plot->add_option("artifacts", plot_dir, "directory containing trajectory.csv / events.csv")
        ->required();
    plot->add_option("--view", plot_views, "comma-separated views: coi, fdelta, fdelta:<id>");
    plot->add_option("-o,--out", plot_out, "output directory (default: artifact dir)");

    std::vector<std::string> batch_cases;
    std::string batch_mode = "individual", batch_out = default_out_dir().string();
    CLI::App* batch = app.add_subcommand("batch", "assess several cases");
    batch->add_option("cases", batch_cases, "case files")->required();
    batch->add_option("-m,--mode", batch_mode, "individual | equivalent");
    batch->add_option("-o,--out", batch_out, "output root (one subdirectory per case)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (assess->parsed()) return cmd_assess(assess_opts, mode, critical_csv, cr_csv, with_plots);
        if (toy->parsed()) return cmd_toy(g, h_peak, mass, launch, toy_dt, toy_t_end, toy_out);
        if (plot->parsed()) return cmd_plot(plot_dir, plot_views, plot_out);
        if (batch->parsed()) {
            int worst = 0;
            for (const std::string& path : batch_cases) {
                CommonOpts o;
                o.case_path = path;
                o.out_dir = (fs::path(batch_out) / fs::path(path).stem()).string();
                const int rc = cmd_assess(o, batch_mode, "", "", false);
                worst = std::max(worst, rc);
            }
            return worst;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
