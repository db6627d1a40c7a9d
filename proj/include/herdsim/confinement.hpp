#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "herdsim/dynamics.hpp"
#include "herdsim/integrate.hpp"
#include "herdsim/params.hpp"
#include "herdsim/rng.hpp"
#include "herdsim/trajectory.hpp"

namespace herdsim {

struct FollowerErrorStats {
    double max_dist = 0.0;
    double mean_dist = 0.0;  // time-weighted over the stored samples
    double final_dist = 0.0;
};

struct BreachInfo {
    double time = 0.0;
    int follower = -1;

    friend bool operator==(const BreachInfo&, const BreachInfo&) = default;
};

struct ConfinementReport {
    bool confined = false;
    std::optional<BreachInfo> first_breach;
    double leader_min_distance = 0.0;
    std::vector<FollowerErrorStats> per_follower;
    std::vector<std::string> warnings;
};

// Distances from each follower to gamma(t/T), aggregated over the stored
// samples. The mean uses trapezoid time weights so sample stride does not
// bias it.
inline std::vector<FollowerErrorStats> tracking_error(const SimulationResult& result,
                                                      const TrajectorySpec& traj) {
    const std::size_t n_followers =
        result.samples.empty() ? 0 : result.samples.front().followers.size();
    std::vector<FollowerErrorStats> stats(n_followers);
    if (result.samples.empty()) return stats;

    const double T = result.params.T;
    std::vector<double> weighted(n_followers, 0.0);
    double total_weight = 0.0;

    for (std::size_t s = 0; s < result.samples.size(); ++s) {
        const auto& sample = result.samples[s];
        const Vec2 target = traj.point(std::clamp(sample.t / T, 0.0, 1.0));
        double w = 0.0;
        if (result.samples.size() > 1) {
            const double prev = (s == 0) ? sample.t : result.samples[s - 1].t;
            const double next = (s + 1 == result.samples.size()) ? sample.t
                                                                 : result.samples[s + 1].t;
            w = (next - prev) / 2.0;
        }
        total_weight += w;
        for (std::size_t i = 0; i < n_followers; ++i) {
            const double d = distance(target, sample.followers[i].position());
            stats[i].max_dist = std::max(stats[i].max_dist, d);
            stats[i].final_dist = d;
            weighted[i] += w * d;
        }
    }
    for (std::size_t i = 0; i < n_followers; ++i)
        stats[i].mean_dist = total_weight > 0.0 ? weighted[i] / total_weight
                                                : stats[i].final_dist;
    return stats;
}

// Checks both confinement inequalities over a finished run: every follower
// strictly inside distance R of gamma(t/T) (ties at R count as breaches) and
// the leader never closer than R (1e-9 slack; its closed form is exact).
// Uses the recorded step-level events as well as the stored samples, so a
// coarse sample stride cannot hide a breach.
inline ConfinementReport verify(const SimulationResult& result, const TrajectorySpec& traj,
                                const SystemParams& params) {
    ConfinementReport report;
    report.per_follower = tracking_error(result, traj);

    report.leader_min_distance = std::numeric_limits<double>::infinity();
    for (const auto& sample : result.samples) {
        const Vec2 target = traj.point(std::clamp(sample.t / params.T, 0.0, 1.0));
        report.leader_min_distance =
            std::min(report.leader_min_distance, distance(target, sample.leader));
    }

    for (const Event& e : result.events) {
        if (e.kind == EventKind::ConfinementBreach &&
            (!report.first_breach || e.time < report.first_breach->time))
            report.first_breach = BreachInfo{e.time, e.agent};
        if (e.kind == EventKind::LeaderTooClose)
            report.leader_min_distance = std::min(report.leader_min_distance, 0.0);
    }
    for (std::size_t s = 0; s < result.samples.size(); ++s) {
        const auto& sample = result.samples[s];
        const Vec2 target = traj.point(std::clamp(sample.t / params.T, 0.0, 1.0));
        for (std::size_t i = 0; i < sample.followers.size(); ++i) {
            if (distance(target, sample.followers[i].position()) >= params.R &&
                (!report.first_breach || sample.t < report.first_breach->time)) {
                report.first_breach = BreachInfo{sample.t, static_cast<int>(i)};
            }
        }
    }

    const bool singular = std::any_of(result.events.begin(), result.events.end(), [](const Event& e) {
        return e.kind == EventKind::Singularity;
    });
    report.confined = !report.first_breach && !result.terminated_early && !singular &&
                      report.leader_min_distance >= params.R - 1e-9;

    if (result.terminated_early)
        report.warnings.push_back("IncompleteRun: integration terminated before T");

    // A trajectory that starts away from the origin while the followers sit
    // near the absolute origin is almost always a frame mix-up: the theory's
    // initial ball is centered on the trajectory start.
    if (!result.samples.empty()) {
        const Vec2 g0 = traj.point(0.0);
        if (norm(g0) > 1e-9) {
            const auto& first = result.samples.front().followers;
            if (!first.empty()) {
                double near_origin = 0.0, near_start = 0.0;
                for (const auto& f : first) {
                    near_origin += norm(f.position());
                    near_start += distance(f.position(), g0);
                }
                if (near_origin < near_start)
                    report.warnings.push_back(
                        "InitialFrame: gamma(0) is away from the origin but the followers "
                        "start near the origin; initial conditions are usually drawn "
                        "around gamma(0)");
            }
        }
    }
    return report;
}

// n follower initial offsets drawn uniformly from the joint 4-ball of the
// given radius over (x, vx, y, vy). Follower i consumes only substream
// (seed, i), so extending n never changes earlier draws.
inline std::vector<std::array<double, 4>> sample_initial_conditions(int n, double radius,
                                                                    std::uint64_t seed) {
    if (!(radius >= 0.0)) throw std::invalid_argument("ic radius must be >= 0");
    std::vector<std::array<double, 4>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        SplitMix64 rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
        std::array<double, 4> g{};
        for (;;) {
            const auto [g0, g1] = next_normal_pair(rng);
            const auto [g2, g3] = next_normal_pair(rng);
            g = {g0, g1, g2, g3};
            const double len = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3);
            if (len > 1e-154) {
                const double scale = radius * std::pow(rng.next_open_unit(), 0.25) / len;
                for (double& c : g) c *= scale;
                break;
            }
        }
        out[static_cast<std::size_t>(i)] = g;
    }
    return out;
}

// Everything one integration needs, without the scenario wrapper: parameters,
// curve, optional coupling graph, the IC ball, and integrator settings.
struct RunSetup {
    SystemParams params;
    TrajectorySpec traj;
    std::optional<InteractionGraph> graph;
    double ic_radius = 0.0;
    std::uint64_t seed = 0;
    IntegrationConfig cfg;
};

// Initial swarm state for a setup: follower offsets are sampled in the ball
// centered on (gamma(0), 0) in (x, vx, y, vy), i.e. positions around the
// trajectory start and velocities around zero; the leader starts on its
// closed-form circle.
inline SwarmState make_initial_state(const RunSetup& setup) {
    SwarmState state;
    state.t = 0.0;
    state.leader = leader_state(0.0, setup.params, setup.traj).position;
    const Vec2 g0 = setup.traj.point(0.0);
    const auto balls =
        sample_initial_conditions(setup.params.N, setup.ic_radius, setup.seed);
    state.followers.reserve(balls.size());
    for (const auto& b : balls)
        state.followers.push_back({g0.x + b[0], b[1], g0.y + b[2], b[3]});
    return state;
}

inline SimulationResult run_simulation(const RunSetup& setup) {
    return integrate(setup.params, setup.traj, make_initial_state(setup),
                     setup.graph ? &*setup.graph : nullptr, setup.cfg);
}

struct SweepAxis {
    std::string name;  // one of: omega, T, ic_radius, seed
    std::vector<double> values;
};

struct SweepCell {
    std::vector<double> coords;  // one value per axis, same order as axes
    std::uint64_t seed = 0;      // the seed this run actually used
    bool confined = false;
    double max_dist = 0.0;  // max over followers of max tracking distance
    std::string note;       // nonempty when the cell failed to run
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    int runs_per_cell = 1;
    std::vector<SweepCell> cells;
};

namespace detail {

inline void apply_axis(RunSetup& setup, const std::string& name, double value) {
    if (name == "omega") {
        setup.params.omega = value;
    } else if (name == "T") {
        setup.params.T = value;
    } else if (name == "ic_radius") {
        setup.ic_radius = value;
    } else if (name == "seed") {
        setup.seed = static_cast<std::uint64_t>(value);
    } else {
        throw std::invalid_argument("unknown sweep axis: " + name);
    }
}

}  // namespace detail

// Grid sweep over {omega, T, ic_radius, seed}. Every (cell, run) pair becomes
// one row; rows are keyed by grid coordinates, so results are identical
// regardless of worker count or completion order. Per-cell failures are
// recorded in the row, never abort the sweep.
inline SweepResult sweep(const RunSetup& base, const std::vector<SweepAxis>& axes,
                         int runs_per_cell = 1, unsigned jobs = 0) {
    if (axes.empty()) throw std::invalid_argument("sweep: no axes given");
    for (const auto& axis : axes) {
        if (axis.values.empty())
            throw std::invalid_argument("sweep: axis " + axis.name + " has no values");
        if (axis.name != "omega" && axis.name != "T" && axis.name != "ic_radius" &&
            axis.name != "seed")
            throw std::invalid_argument("sweep: unknown axis " + axis.name);
    }
    if (runs_per_cell < 1) throw std::invalid_argument("sweep: runs_per_cell must be >= 1");

    std::size_t n_cells = 1;
    for (const auto& axis : axes) n_cells *= axis.values.size();
    const std::size_t n_rows = n_cells * static_cast<std::size_t>(runs_per_cell);

    SweepResult result;
    result.axes = axes;
    result.runs_per_cell = runs_per_cell;
    result.cells.resize(n_rows);

    auto run_row = [&](std::size_t row) {
        const std::size_t cell = row / static_cast<std::size_t>(runs_per_cell);
        const int run = static_cast<int>(row % static_cast<std::size_t>(runs_per_cell));

        RunSetup setup = base;
        SweepCell& out = result.cells[row];
        out.coords.resize(axes.size());
        std::size_t rest = cell;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& axis = axes[a];
            out.coords[a] = axis.values[rest % axis.values.size()];
            rest /= axis.values.size();
        }
        for (std::size_t a = 0; a < axes.size(); ++a)
            detail::apply_axis(setup, axes[a].name, out.coords[a]);
        setup.seed = (runs_per_cell == 1)
                         ? setup.seed
                         : substream_seed(setup.seed, static_cast<std::uint64_t>(run));
        out.seed = setup.seed;

        try {
            const SimulationResult sim = run_simulation(setup);
            const ConfinementReport report = verify(sim, setup.traj, setup.params);
            out.confined = report.confined;
            for (const auto& f : report.per_follower)
                out.max_dist = std::max(out.max_dist, f.max_dist);
        } catch (const std::exception& e) {
            out.note = e.what();
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(n_rows));
    if (jobs <= 1) {
        for (std::size_t row = 0; row < n_rows; ++row) run_row(row);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t row = next.fetch_add(1); row < n_rows;
                     row = next.fetch_add(1))
                    run_row(row);
            });
        for (auto& worker : workers) worker.join();
    }
    return result;
}

}  // namespace herdsim
