#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "herdsim/confinement.hpp"
#include "herdsim/integrate.hpp"
#include "herdsim/scenarios.hpp"
#include "herdsim/trajectory.hpp"

namespace herdsim {

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace detail

// RFC-4180 style CSV of a run: header `t,x_l,y_l` then per follower i the
// columns `x_i,y_i,vx_i,vy_i,dist_i` (distance to gamma(t/T)). One row per
// stored sample.
inline std::string simulation_csv(const SimulationResult& result, const TrajectorySpec& traj) {
    const std::size_t n_followers =
        result.samples.empty() ? 0 : result.samples.front().followers.size();
    std::string out = "t,x_l,y_l";
    for (std::size_t i = 1; i <= n_followers; ++i) {
        const std::string s = std::to_string(i);
        out += ",x_" + s + ",y_" + s + ",vx_" + s + ",vy_" + s + ",dist_" + s;
    }
    out += "\n";
    for (const auto& sample : result.samples) {
        const Vec2 target = traj.point(std::clamp(sample.t / result.params.T, 0.0, 1.0));
        out += detail::fmt_double(sample.t);
        out += ',';
        out += detail::fmt_double(sample.leader.x);
        out += ',';
        out += detail::fmt_double(sample.leader.y);
        for (const auto& f : sample.followers) {
            out += ',';
            out += detail::fmt_double(f.x);
            out += ',';
            out += detail::fmt_double(f.y);
            out += ',';
            out += detail::fmt_double(f.vx);
            out += ',';
            out += detail::fmt_double(f.vy);
            out += ',';
            out += detail::fmt_double(distance(target, f.position()));
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json report_json(const ConfinementReport& report, const Scenario& scenario,
                                  const SimulationResult& result) {
    nlohmann::json j;
    j["scenario"] = scenario.name;
    j["confined"] = report.confined;
    j["terminated_early"] = result.terminated_early;
    if (report.first_breach) {
        j["first_breach"] = {{"time", report.first_breach->time},
                             {"follower", report.first_breach->follower}};
    } else {
        j["first_breach"] = nullptr;
    }
    j["leader_min_distance"] = report.leader_min_distance;
    nlohmann::json pf = nlohmann::json::array();
    for (const auto& f : report.per_follower)
        pf.push_back({{"max_dist", f.max_dist},
                      {"mean_dist", f.mean_dist},
                      {"final_dist", f.final_dist}});
    j["per_follower"] = pf;
    j["warnings"] = report.warnings;
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : result.events)
        events.push_back(
            {{"time", e.time}, {"kind", to_string(e.kind)}, {"agent", e.agent}});
    j["events"] = events;
    j["params"] = {{"A", scenario.params.A},     {"k", scenario.params.k},
                   {"alpha", scenario.params.alpha}, {"omega", scenario.params.omega},
                   {"T", scenario.params.T},     {"R", scenario.params.R},
                   {"N", scenario.params.N},     {"phi", scenario.params.phi},
                   {"seed", scenario.seed},      {"ic_radius", scenario.ic_radius}};
    return j;
}

// Static trajectory plot: target curve, leader path, follower paths as SVG
// polylines in a fixed viewport autoscaled to the data bounds.
inline std::string trajectory_svg(const SimulationResult& result, const TrajectorySpec& traj) {
    constexpr double width = 800.0, height = 800.0, margin = 40.0;

    std::vector<std::vector<Vec2>> paths;  // 0: target, 1: leader, 2..: followers
    std::vector<Vec2> target;
    for (int i = 0; i <= 512; ++i) target.push_back(traj.point(i / 512.0));
    paths.push_back(std::move(target));
    std::vector<Vec2> leader;
    for (const auto& s : result.samples) leader.push_back(s.leader);
    paths.push_back(std::move(leader));
    const std::size_t n_followers =
        result.samples.empty() ? 0 : result.samples.front().followers.size();
    for (std::size_t i = 0; i < n_followers; ++i) {
        std::vector<Vec2> path;
        for (const auto& s : result.samples) path.push_back(s.followers[i].position());
        paths.push_back(std::move(path));
    }

    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    bool first = true;
    for (const auto& path : paths)
        for (const Vec2 p : path) {
            if (first) {
                min_x = max_x = p.x;
                min_y = max_y = p.y;
                first = false;
            }
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double scale = (width - 2.0 * margin) / span;
    auto to_px = [&](Vec2 p) {
        return Vec2{margin + (p.x - min_x) * scale,
                    height - margin - (p.y - min_y) * scale};
    };

    static const char* colors[] = {"#2a9d2a", "#1f5fd0", "#d02f2f", "#d07a2f", "#9c2fd0"};
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(static_cast<int>(width)) + "\" height=\"" +
                      std::to_string(static_cast<int>(height)) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const char* color = (p == 0) ? colors[0] : (p == 1) ? colors[1] : colors[2 + (p - 2) % 3];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"";
        svg += (p == 0) ? "2.5" : "1.2";
        svg += "\" points=\"";
        for (const Vec2 pt : paths[p]) {
            const Vec2 px = to_px(pt);
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px.x, px.y);
            svg += buf;
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

// One row per sweep cell: grid coordinates, seed, verdict, worst distance,
// and a note column that is empty unless the cell failed to run.
inline std::string sweep_csv(const SweepResult& result) {
    std::string out;
    for (const auto& axis : result.axes) out += axis.name + ",";
    out += "seed,confined,max_dist,note\n";
    for (const auto& cell : result.cells) {
        for (double c : cell.coords) out += detail::fmt_double(c) + ",";
        std::string note = cell.note;
        std::replace(note.begin(), note.end(), '\n', ' ');
        std::replace(note.begin(), note.end(), ',', ';');
        out += std::to_string(cell.seed) + "," + (cell.confined ? "1" : "0") + "," +
               detail::fmt_double(cell.max_dist) + "," + note + '\n';
    }
    return out;
}

}  // namespace herdsim
