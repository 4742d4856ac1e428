#include <algorithm>
#include <cmath>
#include <fstream>

#include "csv_util.hpp"
#include "swingkit/case_io.hpp"

namespace swingkit {

using detail::CsvTable;
using detail::kDegPerRad;

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kMarginL = 60.0, kMarginR = 20.0, kMarginT = 30.0, kMarginB = 45.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Scale {
    double x_min, x_max, y_min, y_max;

    double x(double v) const {
        return kMarginL + (v - x_min) / (x_max - x_min) * (kWidth - kMarginL - kMarginR);
    }
    double y(double v) const {
        return kHeight - kMarginB - (v - y_min) / (y_max - y_min) * (kHeight - kMarginT - kMarginB);
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void svg_open(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
}

void svg_axes(std::ofstream& out, const Scale& sc, const std::string& xlabel,
              const std::string& ylabel) {
    out << "<line x1=\"" << sc.x(sc.x_min) << "\" y1=\"" << sc.y(sc.y_min) << "\" x2=\""
        << sc.x(sc.x_max) << "\" y2=\"" << sc.y(sc.y_min) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << sc.x(sc.x_min) << "\" y1=\"" << sc.y(sc.y_min) << "\" x2=\""
        << sc.x(sc.x_min) << "\" y2=\"" << sc.y(sc.y_max) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n"
        << "<text x=\"14\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
        << kHeight / 2 << ")\">" << ylabel << "</text>\n"
        << "<text x=\"" << sc.x(sc.x_min) << "\" y=\"" << kHeight - kMarginB + 16
        << "\" font-size=\"10\">" << num(sc.x_min) << "</text>\n"
        << "<text x=\"" << sc.x(sc.x_max) << "\" y=\"" << kHeight - kMarginB + 16
        << "\" text-anchor=\"end\" font-size=\"10\">" << num(sc.x_max) << "</text>\n"
        << "<text x=\"" << kMarginL - 4 << "\" y=\"" << sc.y(sc.y_min)
        << "\" text-anchor=\"end\" font-size=\"10\">" << num(sc.y_min) << "</text>\n"
        << "<text x=\"" << kMarginL - 4 << "\" y=\"" << sc.y(sc.y_max)
        << "\" text-anchor=\"end\" font-size=\"10\">" << num(sc.y_max) << "</text>\n";
}

void svg_polyline(std::ofstream& out, const Scale& sc, const std::vector<double>& xs,
                  const std::vector<double>& ys, const char* color, const char* dash = nullptr) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\"";
    if (dash) out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) {
        out << num(sc.x(xs[k])) << ',' << num(sc.y(ys[k])) << ' ';
    }
    out << "\"/>\n";
}

std::vector<MachineId> machine_ids_from_header(const CsvTable& t) {
    std::vector<MachineId> ids;
    const std::string prefix = "delta_coi_deg_";
    for (const std::string& h : t.header) {
        if (h.rfind(prefix, 0) == 0) ids.push_back(h.substr(prefix.size()));
    }
    return ids;
}

std::filesystem::path plot_coi(const CsvTable& traj, const std::filesystem::path& out_dir) {
    const std::vector<MachineId> ids = machine_ids_from_header(traj);
    const std::size_t ct = traj.column("time_s");

    std::vector<double> time;
    std::vector<std::vector<double>> coi(ids.size());
    for (const auto& row : traj.rows) {
        time.push_back(std::stod(row[ct]));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            coi[i].push_back(std::stod(row[traj.column("delta_coi_deg_" + ids[i])]));
        }
    }
    Scale sc{time.front(), time.back(), 0.0, 0.0};
    for (const auto& series : coi) {
        for (double v : series) {
            sc.y_min = std::min(sc.y_min, v);
            sc.y_max = std::max(sc.y_max, v);
        }
    }
    if (sc.y_max == sc.y_min) sc.y_max = sc.y_min + 1.0;

    const std::filesystem::path path = out_dir / "coi.svg";
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    svg_open(out, "Machine trajectories, COI-SYS reference");
    svg_axes(out, sc, "time [s]", "delta [deg]");
    // RM is the zero horizontal line in its own reference.
    svg_polyline(out, sc, {sc.x_min, sc.x_max}, {0.0, 0.0}, "#444444", "6,4");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const char* color = kPalette[i % 10];
        svg_polyline(out, sc, time, coi[i], color);
        out << "<text x=\"" << kWidth - kMarginR - 60 << "\" y=\"" << kMarginT + 14.0 * (double)i
            << "\" font-size=\"11\" fill=\"" << color << "\">" << ids[i] << "</text>\n";
    }
    out << "</svg>\n";
    return path;
}

std::filesystem::path plot_fdelta(const RunArtifacts& artifacts, const CsvTable& traj,
                                  const MachineId& machine,
                                  const std::filesystem::path& out_dir) {
    if (artifacts.events_csv.empty() || !std::filesystem::exists(artifacts.events_csv)) {
        throw ValidationError("fdelta view requires an assessed run (events.csv missing)");
    }
    const double t0 = std::stod(traj.meta.at("t0"));
    const double tc = std::stod(traj.meta.at("tc"));
    const std::size_t ct = traj.column("time_s");
    const std::size_t cd = traj.column("delta_coi_deg_" + machine);
    const std::size_t cf = traj.column("f_pu_" + machine);

    const CsvTable events = detail::read_csv(artifacts.events_csv);
    double t_mpp = -1.0;
    for (const auto& row : events.rows) {
        if (row[events.column("machine")] == machine &&
            row[events.column("kind")] != "inconclusive") {
            t_mpp = std::stod(row[events.column("time_s")]);
        }
    }

    std::vector<double> d_acc, f_acc, d_dec, f_dec;
    for (const auto& row : traj.rows) {
        const double t = std::stod(row[ct]);
        const double d = std::stod(row[cd]);
        const double fv = std::stod(row[cf]);
        if (t >= t0 - 1e-12 && t <= tc + 1e-12) {
            d_acc.push_back(d);
            f_acc.push_back(fv);
        }
        if (t >= tc - 1e-12 && (t_mpp < 0.0 || t <= t_mpp + 1e-12)) {
            d_dec.push_back(d);
            f_dec.push_back(fv);
        }
    }
    if (d_acc.empty() && d_dec.empty()) throw ValidationError("fdelta: no samples in window");

    Scale sc{1e300, -1e300, 0.0, 0.0};
    auto grow = [&](const std::vector<double>& ds, const std::vector<double>& fs) {
        for (double v : ds) {
            sc.x_min = std::min(sc.x_min, v);
            sc.x_max = std::max(sc.x_max, v);
        }
        for (double v : fs) {
            sc.y_min = std::min(sc.y_min, v);
            sc.y_max = std::max(sc.y_max, v);
        }
    };
    grow(d_acc, f_acc);
    grow(d_dec, f_dec);
    if (sc.x_max == sc.x_min) sc.x_max = sc.x_min + 1.0;
    if (sc.y_max == sc.y_min) sc.y_max = sc.y_min + 1.0;

    const std::filesystem::path path = out_dir / ("fdelta_" + machine + ".svg");
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    svg_open(out, "f-delta plane, machine " + machine);
    svg_axes(out, sc, "delta_rel [deg]", "f [p.u.]");

    auto shade = [&](const std::vector<double>& ds, const std::vector<double>& fs,
                     const char* fill) {
        if (ds.size() < 2) return;
        out << "<polygon fill=\"" << fill << "\" fill-opacity=\"0.35\" stroke=\"none\" points=\"";
        for (std::size_t k = 0; k < ds.size(); ++k) {
            out << num(sc.x(ds[k])) << ',' << num(sc.y(fs[k])) << ' ';
        }
        out << num(sc.x(ds.back())) << ',' << num(sc.y(0.0)) << ' ';
        out << num(sc.x(ds.front())) << ',' << num(sc.y(0.0));
        out << "\"/>\n";
    };
    shade(d_acc, f_acc, "#d62728");
    shade(d_dec, f_dec, "#1f77b4");
    svg_polyline(out, sc, {sc.x_min, sc.x_max}, {0.0, 0.0}, "#444444", "6,4");
    if (!d_acc.empty()) svg_polyline(out, sc, d_acc, f_acc, "#d62728");
    if (!d_dec.empty()) svg_polyline(out, sc, d_dec, f_dec, "#1f77b4");

    const CsvAreas areas =
        recompute_areas_from_csv(artifacts.trajectory_csv, artifacts.events_csv, machine);
    out << "<text x=\"" << kMarginL + 10 << "\" y=\"" << kMarginT + 14
        << "\" font-size=\"12\" fill=\"#d62728\">A_acc = " << detail::fmt_double(areas.a_acc)
        << " p.u.</text>\n";
    out << "<text x=\"" << kMarginL + 10 << "\" y=\"" << kMarginT + 30
        << "\" font-size=\"12\" fill=\"#1f77b4\">A_dec = " << detail::fmt_double(areas.a_dec)
        << " p.u.</text>\n";
    out << "</svg>\n";
    return path;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const RunArtifacts& artifacts,
                                              const std::vector<std::string>& views,
                                              const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> out;
    if (views.empty()) return out;
    std::filesystem::create_directories(out_dir);
    const CsvTable traj = detail::read_csv(artifacts.trajectory_csv);

    for (const std::string& view : views) {
        if (view == "coi") {
            out.push_back(plot_coi(traj, out_dir));
        } else if (view == "fdelta" || view.rfind("fdelta:", 0) == 0) {
            MachineId machine;
            if (view.size() > 7 && view[6] == ':') {
                machine = view.substr(7);
            } else {
                // Default: the machine with the largest COI-frame excursion.
                double best = -1.0;
                for (const MachineId& id : machine_ids_from_header(traj)) {
                    const std::size_t col = traj.column("delta_coi_deg_" + id);
                    double peak = 0.0;
                    for (const auto& row : traj.rows) {
                        peak = std::max(peak, std::abs(std::stod(row[col])));
                    }
                    if (peak > best) {
                        best = peak;
                        machine = id;
                    }
                }
            }
            out.push_back(plot_fdelta(artifacts, traj, machine, out_dir));
        } else {
            throw ValidationError("unknown plot view: " + view);
        }
    }
    return out;
}

}  // namespace swingkit
