#include "swingkit/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "csv_util.hpp"
#include "json.hpp"

namespace swingkit {

using nlohmann::json;
using detail::fmt_double;
using detail::kDegPerRad;

namespace {

constexpr double kEquilibriumTol = 1e-3;
constexpr double kSymmetryTol = 1e-9;

SquareMatrix parse_matrix(const json& j, std::size_t n, const std::string& where) {
    if (!j.is_array() || j.size() != n) {
        throw ValidationError(where + ": expected a " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix");
    }
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != n) {
            throw ValidationError(where + ": row " + std::to_string(i) + " has wrong length");
        }
        for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k].get<double>();
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (std::abs(m(i, k) - m(k, i)) > kSymmetryTol) {
                throw ValidationError(where + ": matrix is not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(k) + ")");
            }
        }
    }
    return m;
}

NetworkStage parse_stage(const json& j, StageLabel label, std::size_t n) {
    const std::string where = std::string("stage ") + to_string(label);
    if (!j.contains("g") || !j.contains("b")) {
        throw ValidationError(where + ": needs 'g' and 'b' matrices");
    }
    NetworkStage st;
    st.label = label;
    st.conductance = parse_matrix(j.at("g"), n, where + " g");
    st.susceptance = parse_matrix(j.at("b"), n, where + " b");
    return st;
}

json dump_matrix(const SquareMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.n; ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

void check_id_list(const SimCase& sim, const std::vector<MachineId>& ids, const char* what) {
    for (const MachineId& id : ids) {
        sim.index_of(id);  // throws on unknown
        (void)what;
    }
}

}  // namespace

CaseFile load_case(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open case file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("parse error in " + path.string() + ": " + e.what());
    }

    CaseFile c;
    try {
        if (!j.contains("schema_version")) throw ValidationError("missing schema_version");
        c.schema_version = j.at("schema_version").get<int>();
        if (c.schema_version != 1) throw ValidationError("unsupported schema_version");
        c.name = j.value("name", path.stem().string());
        c.base_mva = j.value("base_mva", 100.0);

        const json& jm = j.at("machines");
        std::set<MachineId> seen;
        for (const json& m : jm) {
            MachineParams p;
            p.id = m.at("id").get<MachineId>();
            p.inertia = m.at("inertia").get<double>();
            p.mech_power = m.at("mech_power").get<double>();
            p.internal_emf = m.at("internal_emf").get<double>();
            if (p.inertia <= 0.0) throw ValidationError("machine " + p.id + ": inertia must be positive");
            if (p.internal_emf <= 0.0) throw ValidationError("machine " + p.id + ": emf must be positive");
            if (p.id.empty() || p.id.find(',') != std::string::npos || p.id.find(' ') != std::string::npos) {
                throw ValidationError("machine id must be non-empty without commas or spaces");
            }
            if (!seen.insert(p.id).second) throw ValidationError("duplicate machine id: " + p.id);
            c.sim.machines.push_back(p);
        }
        const std::size_t n = c.sim.machines.size();
        if (n == 0) throw ValidationError("case has no machines");

        const json& js = j.at("stages");
        c.sim.prefault = parse_stage(js.at("prefault"), StageLabel::Prefault, n);
        c.sim.fault_on = parse_stage(js.at("fault_on"), StageLabel::FaultOn, n);
        c.sim.postfault = parse_stage(js.at("postfault"), StageLabel::Postfault, n);

        const json& ji = j.at("initial");
        const json& jd = ji.at("delta_deg");
        if (jd.size() != n) throw ValidationError("initial delta_deg length mismatch");
        c.sim.initial.time = 0.0;
        for (const json& v : jd) c.sim.initial.delta.push_back(v.get<double>() / kDegPerRad);
        if (ji.contains("omega")) {
            if (ji.at("omega").size() != n) throw ValidationError("initial omega length mismatch");
            for (const json& v : ji.at("omega")) c.sim.initial.omega.push_back(v.get<double>());
        } else {
            c.sim.initial.omega.assign(n, 0.0);
        }

        const json& jf = j.at("fault");
        c.fault.t0 = jf.at("t0").get<double>();
        c.fault.tc = jf.at("tc").get<double>();
        c.fault.t_end = jf.at("t_end").get<double>();
        c.fault.dt = jf.value("dt", 1e-3);
        if (c.fault.dt <= 0.0) throw ValidationError("fault.dt must be positive");
        if (!(c.fault.t0 <= c.fault.tc && c.fault.tc <= c.fault.t_end)) {
            throw ValidationError("fault times must satisfy t0 <= tc <= t_end");
        }

        if (j.contains("critical")) c.critical = j.at("critical").get<std::vector<MachineId>>();
        if (j.contains("group_cr")) c.group_cr = j.at("group_cr").get<std::vector<MachineId>>();
        check_id_list(c.sim, c.critical, "critical");
        check_id_list(c.sim, c.group_cr, "group_cr");

        if (j.contains("tolerances")) {
            const json& jt = j.at("tolerances");
            c.tolerances.residual_tol = jt.value("event_residual", c.tolerances.residual_tol);
            c.tolerances.quadrature_tol = jt.value("quadrature", c.tolerances.quadrature_tol);
            c.tolerances.non_disturbed_tol = jt.value("non_disturbed", c.tolerances.non_disturbed_tol);
        }
    } catch (const json::exception& e) {
        throw ValidationError("invalid case file " + path.string() + ": " + e.what());
    }

    const double res = equilibrium_residual(c.sim);
    if (res >= kEquilibriumTol) {
        throw ValidationError("initial snapshot is not a pre-fault equilibrium (residual " +
                              fmt_double(res) + " p.u.)");
    }
    return c;
}

void save_case(const CaseFile& c, const std::filesystem::path& path) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    j["base_mva"] = c.base_mva;
    j["machines"] = json::array();
    for (const MachineParams& m : c.sim.machines) {
        j["machines"].push_back({{"id", m.id},
                                 {"inertia", m.inertia},
                                 {"mech_power", m.mech_power},
                                 {"internal_emf", m.internal_emf}});
    }
    j["stages"]["prefault"] = {{"g", dump_matrix(c.sim.prefault.conductance)},
                               {"b", dump_matrix(c.sim.prefault.susceptance)}};
    j["stages"]["fault_on"] = {{"g", dump_matrix(c.sim.fault_on.conductance)},
                               {"b", dump_matrix(c.sim.fault_on.susceptance)}};
    j["stages"]["postfault"] = {{"g", dump_matrix(c.sim.postfault.conductance)},
                                {"b", dump_matrix(c.sim.postfault.susceptance)}};
    json deg = json::array();
    for (double d : c.sim.initial.delta) deg.push_back(d * kDegPerRad);
    j["initial"]["delta_deg"] = deg;
    j["initial"]["omega"] = c.sim.initial.omega;
    j["fault"] = {{"t0", c.fault.t0}, {"tc", c.fault.tc}, {"t_end", c.fault.t_end}, {"dt", c.fault.dt}};
    if (!c.critical.empty()) j["critical"] = c.critical;
    if (!c.group_cr.empty()) j["group_cr"] = c.group_cr;
    j["tolerances"] = {{"event_residual", c.tolerances.residual_tol},
                       {"quadrature", c.tolerances.quadrature_tol},
                       {"non_disturbed", c.tolerances.non_disturbed_tol}};

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write case file: " + path.string());
    out << j.dump(2) << "\n";
}

namespace {

std::vector<std::size_t> resolve_ids(const SimCase& sim, const std::vector<MachineId>& ids) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (const MachineId& id : ids) out.push_back(sim.index_of(id));
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const SystemTrajectory& traj,
                          const std::vector<MachineParams>& machines,
                          const std::vector<TwoMachineSeries>& rel) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "# t0=" << fmt_double(traj.t_fault) << " tc=" << fmt_double(traj.t_clear)
        << " dt=" << fmt_double(traj.dt) << " n=" << machines.size() << "\n";
    out << "time_s";
    for (const MachineParams& m : machines) {
        out << ",delta_deg_" << m.id << ",delta_coi_deg_" << m.id << ",omega_radps_" << m.id
            << ",omega_coi_radps_" << m.id << ",f_pu_" << m.id;
    }
    out << "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << fmt_double(traj.time[k]);
        for (std::size_t i = 0; i < machines.size(); ++i) {
            out << ',' << fmt_double(traj.delta[k][i] * kDegPerRad) << ','
                << fmt_double(rel[i].delta_rel[k] * kDegPerRad) << ','
                << fmt_double(traj.omega[k][i]) << ',' << fmt_double(rel[i].omega_rel[k]) << ','
                << fmt_double(rel[i].force[k]);
        }
        out << "\n";
    }
}

void write_events_csv(const std::filesystem::path& path, const AssessmentReport& rep) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "kind,machine,time_s,delta_rel_deg,residual_ke_pu,a_acc_pu,a_dec_pu,status,margin_pu\n";
    for (const MachineVerdict& v : rep.verdicts) {
        out << event_name(v.event.expression, v.event.kind) << ',' << v.machine << ','
            << fmt_double(v.event.time) << ',' << fmt_double(v.event.delta_rel * kDegPerRad) << ','
            << fmt_double(v.event.residual_ke) << ',' << fmt_double(v.ledger.a_acc) << ','
            << fmt_double(v.ledger.a_dec) << ',' << to_string(v.status) << ','
            << fmt_double(v.margin) << "\n";
    }
}

void write_report(const std::filesystem::path& path, const CaseFile& c,
                  const SystemTrajectory& traj, const AssessmentReport& rep,
                  const std::vector<MachineId>& critical_ids) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    char buf[128];
    auto line = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out << buf << "\n";
    };

    out << "Case: " << c.name << "\n";
    out << "Mode: " << (rep.mode == AssessmentMode::Individual ? "individual" : "equivalent") << "\n";
    line("Machines: %zu   dt=%g s   t0=%g s   tc=%g s   t_end=%g s", c.sim.machines.size(),
         traj.dt, traj.t_fault, traj.t_clear, traj.time.back());
    out << "Analyzed machines:";
    for (const MachineId& id : critical_ids) out << ' ' << id;
    out << "\n\nEvent timeline:\n";
    for (const MachineVerdict& v : rep.verdicts) {
        if (v.event.kind == EventKind::Inconclusive) {
            line("  %-6s %-8s no event within horizon%s",
                 "-", v.machine.c_str(), v.event.non_disturbed ? " (non-disturbed)" : "");
        } else {
            line("  %-6s %-8s t=%.6f s   delta_rel=%.4f deg   residual_ke=%.6f p.u.",
                 event_name(v.event.expression, v.event.kind), v.machine.c_str(), v.event.time,
                 v.event.delta_rel * kDegPerRad, v.event.residual_ke);
        }
    }
    out << "\nVerdicts:\n";
    for (const MachineVerdict& v : rep.verdicts) {
        line("  %-8s %-12s margin=%.6f p.u.", v.machine.c_str(), to_string(v.status), v.margin);
    }
    out << "\n";
    line("Unstable machines: %d", rep.unstable_count);
    if (rep.instability_time) line("Instability time: %.6f s", *rep.instability_time);
    if (rep.severity_time) {
        line("Severity time: %.6f s (max over analyzed-machine events)", *rep.severity_time);
    }
    switch (rep.system_status) {
        case SystemStatus::Stable: out << "SYSTEM STABLE\n"; break;
        case SystemStatus::Unstable: out << "SYSTEM UNSTABLE\n"; break;
        case SystemStatus::Inconclusive:
            out << "SYSTEM INCONCLUSIVE (consider extending t_end)\n";
            break;
    }
}

}  // namespace

RunResult run_case(const CaseFile& c, const RunOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);

    FaultSchedule f = c.fault;
    if (opt.dt_override) f.dt = *opt.dt_override;
    if (opt.t_end_override) f.t_end = *opt.t_end_override;

    RunResult result;
    result.trajectory = simulate(c.sim, f.t0, f.tc, f.t_end, f.dt);
    const SystemTrajectory& traj = result.trajectory;

    const ReferenceMachine rm = build_machine_sys(traj, c.sim.machines);
    std::vector<TwoMachineSeries> rel;
    rel.reserve(c.sim.machines.size());
    for (std::size_t i = 0; i < c.sim.machines.size(); ++i) {
        rel.push_back(relative_series(traj, c.sim.machines, i, rm));
    }

    result.artifacts.trajectory_csv = opt.out_dir / "trajectory.csv";
    write_trajectory_csv(result.artifacts.trajectory_csv, traj, c.sim.machines, rel);

    if (!opt.mode) return result;

    std::vector<MachineId> critical_ids =
        !opt.critical_override.empty() ? opt.critical_override : c.critical;
    std::vector<std::size_t> critical;
    if (critical_ids.empty()) {
        critical = select_critical(traj, c.sim.machines);
        for (std::size_t i : critical) critical_ids.push_back(c.sim.machines[i].id);
    } else {
        critical = resolve_ids(c.sim, critical_ids);
    }

    AssessmentReport rep;
    if (*opt.mode == AssessmentMode::Individual) {
        rep = assess_individual(traj, c.sim.machines, critical, c.tolerances);
    } else {
        std::vector<MachineId> cr_ids =
            !opt.cr_override.empty() ? opt.cr_override
            : !c.group_cr.empty()    ? c.group_cr
                                     : critical_ids;
        GroupSeparation sep;
        sep.cr = resolve_ids(c.sim, cr_ids);
        for (std::size_t i = 0; i < c.sim.machines.size(); ++i) {
            if (std::find(sep.cr.begin(), sep.cr.end(), i) == sep.cr.end()) sep.ncr.push_back(i);
        }
        rep = assess_equivalent(traj, c.sim.machines, sep, c.tolerances);
    }

    result.artifacts.events_csv = opt.out_dir / "events.csv";
    write_events_csv(result.artifacts.events_csv, rep);
    result.artifacts.report_txt = opt.out_dir / "report.txt";
    write_report(result.artifacts.report_txt, c, traj, rep, critical_ids);
    result.report = rep;
    return result;
}

CsvAreas recompute_areas_from_csv(const std::filesystem::path& trajectory_csv,
                                  const std::filesystem::path& events_csv,
                                  const MachineId& machine) {
    const detail::CsvTable traj = detail::read_csv(trajectory_csv);
    const detail::CsvTable events = detail::read_csv(events_csv);

    const double t0 = std::stod(traj.meta.at("t0"));
    const double tc = std::stod(traj.meta.at("tc"));
    const std::size_t ct = traj.column("time_s");
    const std::size_t cd = traj.column("delta_coi_deg_" + machine);
    const std::size_t cf = traj.column("f_pu_" + machine);

    double t_mpp = traj.rows.empty() ? 0.0 : std::stod(traj.rows.back()[ct]);
    bool has_event = false;
    const std::size_t ek = events.column("kind");
    const std::size_t em = events.column("machine");
    const std::size_t et = events.column("time_s");
    for (const auto& row : events.rows) {
        if (row[em] == machine && row[ek] != "inconclusive") {
            t_mpp = std::stod(row[et]);
            has_event = true;
        }
    }
    if (!has_event) throw ValidationError("no event for machine " + machine + " in " +
                                          events_csv.string());

    CsvAreas areas;
    double prev_t = 0.0, prev_d = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (const auto& row : traj.rows) {
        const double t = std::stod(row[ct]);
        const double d = std::stod(row[cd]) / kDegPerRad;
        const double fv = std::stod(row[cf]);
        if (have_prev) {
            if (prev_t >= t0 - 1e-12 && t <= tc + 1e-12) {
                areas.a_acc += 0.5 * (prev_f + fv) * (d - prev_d);
            }
            if (prev_t >= tc - 1e-12 && t <= t_mpp + 1e-15) {
                areas.a_dec += -0.5 * (prev_f + fv) * (d - prev_d);
            } else if (prev_t >= tc - 1e-12 && prev_t < t_mpp && t > t_mpp) {
                const double frac = (t_mpp - prev_t) / (t - prev_t);
                const double d_ev = prev_d + frac * (d - prev_d);
                const double f_ev = prev_f + frac * (fv - prev_f);
                areas.a_dec += -0.5 * (prev_f + f_ev) * (d_ev - prev_d);
            }
        }
        prev_t = t;
        prev_d = d;
        prev_f = fv;
        have_prev = true;
    }
    return areas;
}

}  // namespace swingkit
