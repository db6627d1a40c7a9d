#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "herdsim/confinement.hpp"
#include "herdsim/dynamics.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/graph.hpp"
#include "herdsim/params.hpp"
#include "herdsim/trajectory.hpp"

namespace herdsim {

// A named, fully parameterized run configuration. ic_radius is the radius of
// the joint (x, vx, y, vy) ball the follower initial conditions are drawn
// from, centered on the trajectory start.
struct Scenario {
    std::string name;
    SystemParams params;
    TrajectorySpec traj;
    double ic_radius = 0.0;
    std::uint64_t seed = 1;
    std::optional<InteractionGraph> graph;
    double min_speed = 0.0;

    int n_followers() const { return params.N; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline std::vector<std::string> validate(const Scenario& s) {
    auto v = validate(s.params);
    if (!(s.ic_radius >= 0.0)) v.push_back("ic_radius must be >= 0");
    if (!(s.min_speed >= 0.0)) v.push_back("min_speed must be >= 0");
    if (s.graph) {
        auto gv = s.graph->violations();
        v.insert(v.end(), gv.begin(), gv.end());
        if (s.graph->n != s.params.N)
            v.push_back("graph node count must equal N");
    }
    return v;
}

inline RunSetup to_run_setup(const Scenario& s) {
    RunSetup setup;
    setup.params = s.params;
    setup.traj = s.traj;
    setup.graph = s.graph;
    setup.ic_radius = s.ic_radius;
    setup.seed = s.seed;
    setup.cfg.min_speed = s.min_speed;
    return setup;
}

// Simulation Case 1: three followers herded around a circle of radius 2.
inline Scenario case1() {
    Scenario s;
    s.name = "case1";
    s.params = {.A = 1.0,
                .k = 0.05,
                .alpha = 10.0,
                .omega = 10.0,
                .T = 40.0 * M_PI,
                .R = 1.0,
                .N = 3,
                .phi = 0.0};
    s.traj = TrajectorySpec::circle(2.0, 1.0);
    s.ic_radius = 0.125;
    return s;
}

// Simulation Case 2: open curve (10*cos(4*pi*theta), 2*pi*theta), weaker
// damping, wider initial ball.
inline Scenario case2() {
    Scenario s;
    s.name = "case2";
    s.params = {.A = 1.0,
                .k = 0.03,
                .alpha = 5.0,
                .omega = 20.0,
                .T = 80.0 * M_PI,
                .R = 1.0,
                .N = 3,
                .phi = 0.0};
    LissajousTraj traj;
    traj.ax = 10.0;
    traj.fx = 2.0;
    traj.poly_y = {0.0, 2.0 * M_PI};
    s.traj = TrajectorySpec::lissajous(traj);
    s.ic_radius = 0.5;
    return s;
}

// Simulated-follower analog of the robot experiment: one loop of the 67 cm
// target circle over T = 2*pi/0.02, leader orbit radius 38 cm, repulsion
// normalized to unit force at that separation. Lengths are in centimeters
// throughout this scenario; the dynamics are unit-agnostic. The follower
// starts exactly at the center of the leader's orbit (ic_radius = 0).
inline Scenario experiment_circle() {
    Scenario s;
    s.name = "experiment_circle";
    s.params = {.A = amplitude_for_radius(38.0, 4.0),
                .k = 1.0,
                .alpha = 4.0,
                .omega = 2.0,
                .T = 2.0 * M_PI / 0.02,
                .R = 38.0,
                .N = 1,
                .phi = 0.0};
    s.traj = TrajectorySpec::circle(67.0, 1.0);
    s.ic_radius = 0.0;
    return s;
}

inline const std::vector<std::string>& builtin_scenario_names() {
    static const std::vector<std::string> names = {"case1", "case2", "experiment_circle"};
    return names;
}

inline std::optional<Scenario> builtin_scenario(const std::string& name) {
    if (name == "case1") return case1();
    if (name == "case2") return case2();
    if (name == "experiment_circle") return experiment_circle();
    return std::nullopt;
}

namespace detail {

using nlohmann::json;

inline json trajectory_to_json(const TrajectorySpec& traj) {
    json j;
    if (const auto* c = std::get_if<CircleTraj>(&traj.variant())) {
        j["type"] = "circle";
        j["radius"] = c->radius;
        j["turns"] = c->turns;
    } else if (const auto* l = std::get_if<LissajousTraj>(&traj.variant())) {
        j["type"] = "lissajous";
        j["ax"] = l->ax;
        j["fx"] = l->fx;
        j["ay"] = l->ay;
        j["fy"] = l->fy;
        j["phase_x"] = l->phase_x;
        j["phase_y"] = l->phase_y;
        j["poly_x"] = l->poly_x;
        j["poly_y"] = l->poly_y;
    } else if (const auto* w = std::get_if<WaypointsTraj>(&traj.variant())) {
        j["type"] = "waypoints";
        json pts = json::array();
        for (std::size_t i = 0; i < w->theta.size(); ++i)
            pts.push_back({w->theta[i], w->points[i].x, w->points[i].y});
        j["points"] = pts;
    }
    return j;
}

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) {
                ok = true;
                break;
            }
        if (!ok) throw ParseError("unknown key '" + key + "' in " + where);
    }
}

inline TrajectorySpec trajectory_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ParseError("trajectory: expected an object with a 'type' key");
    const std::string type = j.at("type").get<std::string>();
    if (type == "circle") {
        reject_unknown_keys(j, {"type", "radius", "turns"}, "trajectory(circle)");
        return TrajectorySpec::circle(j.value("radius", 1.0), j.value("turns", 1.0));
    }
    if (type == "lissajous") {
        reject_unknown_keys(
            j, {"type", "ax", "fx", "ay", "fy", "phase_x", "phase_y", "poly_x", "poly_y"},
            "trajectory(lissajous)");
        LissajousTraj l;
        l.ax = j.value("ax", 0.0);
        l.fx = j.value("fx", 0.0);
        l.ay = j.value("ay", 0.0);
        l.fy = j.value("fy", 0.0);
        l.phase_x = j.value("phase_x", 0.0);
        l.phase_y = j.value("phase_y", 0.0);
        if (j.contains("poly_x")) l.poly_x = j.at("poly_x").get<std::array<double, 2>>();
        if (j.contains("poly_y")) l.poly_y = j.at("poly_y").get<std::array<double, 2>>();
        return TrajectorySpec::lissajous(l);
    }
    if (type == "waypoints") {
        reject_unknown_keys(j, {"type", "points"}, "trajectory(waypoints)");
        std::vector<std::pair<double, Vec2>> pts;
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != 3)
                throw ParseError("trajectory(waypoints): each point must be [theta, x, y]");
            pts.emplace_back(p[0].get<double>(),
                             Vec2{p[1].get<double>(), p[2].get<double>()});
        }
        return TrajectorySpec::waypoints(pts);
    }
    throw ParseError("trajectory: unknown type '" + type + "'");
}

}  // namespace detail

inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["A"] = s.params.A;
    j["k"] = s.params.k;
    j["alpha"] = s.params.alpha;
    j["omega"] = s.params.omega;
    j["T"] = s.params.T;
    j["R"] = s.params.R;
    j["N"] = s.params.N;
    j["phi"] = s.params.phi;
    j["seed"] = s.seed;
    j["ic_radius"] = s.ic_radius;
    j["trajectory"] = detail::trajectory_to_json(s.traj);
    if (s.graph) {
        nlohmann::json edges = nlohmann::json::array();
        for (auto [a, b] : s.graph->edges) edges.push_back({a, b});
        j["graph"] = {{"edges", edges}};
    }
    if (s.min_speed > 0.0) j["min_speed"] = s.min_speed;
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
    detail::reject_unknown_keys(j,
                                {"name", "A", "k", "alpha", "omega", "T", "R", "N", "phi",
                                 "seed", "ic_radius", "trajectory", "graph", "min_speed"},
                                "scenario");
    Scenario s;
    try {
        s.name = j.value("name", std::string("unnamed"));
        s.params.A = j.at("A").get<double>();
        s.params.k = j.at("k").get<double>();
        s.params.alpha = j.at("alpha").get<double>();
        s.params.omega = j.at("omega").get<double>();
        s.params.T = j.at("T").get<double>();
        s.params.R = j.at("R").get<double>();
        s.params.N = j.at("N").get<int>();
        s.params.phi = j.value("phi", 0.0);
        s.seed = j.value("seed", std::uint64_t{1});
        s.ic_radius = j.value("ic_radius", 0.0);
        s.traj = detail::trajectory_from_json(j.at("trajectory"));
        if (j.contains("min_speed")) s.min_speed = j.at("min_speed").get<double>();
        if (j.contains("graph")) {
            const auto& gj = j.at("graph");
            detail::reject_unknown_keys(gj, {"edges"}, "graph");
            std::vector<std::pair<int, int>> edges;
            for (const auto& e : gj.at("edges")) {
                if (!e.is_array() || e.size() != 2)
                    throw ParseError("graph: each edge must be [i, j]");
                edges.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
            // Graph construction validates itself; surface its complaints
            // as scenario validation errors.
            s.graph = InteractionGraph(s.params.N, std::move(edges));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    auto violations = validate(s);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("scenario file " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open scenario file for writing: " + path.string());
    out << scenario_to_json(s).dump(2) << '\n';
}

}  // namespace herdsim
