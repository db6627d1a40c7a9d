#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "herdsim/dynamics.hpp"
#include "herdsim/errors.hpp"
#include "herdsim/graph.hpp"
#include "herdsim/params.hpp"
#include "herdsim/state.hpp"
#include "herdsim/trajectory.hpp"

namespace herdsim {

struct IntegrationConfig {
    // Fixed-step RK4 with the step tied to the known fast timescale: at least
    // this many substeps per leader oscillation, and at least 1e4 steps over
    // the mission. Fixed step keeps runs bit-deterministic.
    int substeps_per_oscillation = 32;
    std::size_t max_samples = 200000;
    int sample_stride = 1;
    double min_speed = 0.0;  // follower motor deadband, 0 = off

    double step(const SystemParams& params) const {
        if (substeps_per_oscillation < 8)
            throw std::invalid_argument("substeps_per_oscillation must be >= 8");
        return std::min(2.0 * M_PI / (params.omega * substeps_per_oscillation),
                        params.T / 1e4);
    }
};

enum class EventKind { ConfinementBreach, LeaderTooClose, Singularity };

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::ConfinementBreach: return "ConfinementBreach";
        case EventKind::LeaderTooClose: return "LeaderTooClose";
        case EventKind::Singularity: return "Singularity";
    }
    return "Unknown";
}

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::ConfinementBreach;
    int agent = -1;  // follower index, -1 for the leader

    friend bool operator==(const Event&, const Event&) = default;
};

struct SimulationResult {
    SystemParams params;
    std::vector<SwarmState> samples;
    std::vector<Event> events;
    bool terminated_early = false;
};

// Pointwise confinement monitor: a follower at distance >= R from gamma(t/T)
// breaches (strict inequality is required to hold); the leader must stay at
// least R away, checked with a 1e-9 slack since its closed form is exact.
inline std::vector<Event> monitor(const SwarmState& state, const SystemParams& params,
                                  const TrajectorySpec& traj) {
    std::vector<Event> events;
    const Vec2 target = traj.point(std::clamp(state.t / params.T, 0.0, 1.0));
    for (std::size_t i = 0; i < state.followers.size(); ++i) {
        if (distance(target, state.followers[i].position()) >= params.R)
            events.push_back({state.t, EventKind::ConfinementBreach, static_cast<int>(i)});
    }
    if (distance(target, state.leader) < params.R - 1e-9)
        events.push_back({state.t, EventKind::LeaderTooClose, -1});
    return events;
}

// Classical RK4 on the follower subsystem over [0, T]. The leader is always
// evaluated in closed form, including in the stored samples. Breach events
// are recorded edge-triggered at every accepted step (not only at stored
// samples) and do not stop the run; a singular separation or a non-finite
// state stops it.
inline SimulationResult integrate(const SystemParams& params, const TrajectorySpec& traj,
                                  const SwarmState& initial,
                                  const InteractionGraph* graph = nullptr,
                                  const IntegrationConfig& cfg = {}) {
    if (initial.t != 0.0) throw std::invalid_argument("integrate: initial state must be at t = 0");
    if (initial.followers.size() != static_cast<std::size_t>(params.N))
        throw std::invalid_argument("integrate: follower count does not match params.N");
    if (graph && graph->n != params.N)
        throw std::invalid_argument("integrate: graph node count does not match params.N");

    const double h_max = cfg.step(params);
    const auto n_steps = static_cast<std::size_t>(std::ceil(params.T / h_max - 1e-12));
    const double h = params.T / static_cast<double>(n_steps);
    const std::size_t stride = std::max<std::size_t>(
        {1, static_cast<std::size_t>(std::max(cfg.sample_stride, 1)),
         (n_steps + cfg.max_samples) / std::max<std::size_t>(cfg.max_samples, 1)});

    SimulationResult result;
    result.params = params;
    result.samples.reserve(n_steps / stride + 2);

    SwarmState state = initial;
    state.t = 0.0;
    state.leader = leader_state(0.0, params, traj).position;

    std::vector<bool> breached(state.followers.size(), false);
    bool leader_close = false;

    auto record_events = [&](const SwarmState& s) {
        for (const Event& e : monitor(s, params, traj)) {
            if (e.kind == EventKind::ConfinementBreach) {
                if (!breached[static_cast<std::size_t>(e.agent)]) {
                    breached[static_cast<std::size_t>(e.agent)] = true;
                    result.events.push_back(e);
                }
            } else if (e.kind == EventKind::LeaderTooClose) {
                if (!leader_close) {
                    leader_close = true;
                    result.events.push_back(e);
                }
            }
        }
        // Re-arm edge detection once an agent returns inside.
        const Vec2 target = traj.point(std::clamp(s.t / params.T, 0.0, 1.0));
        for (std::size_t i = 0; i < s.followers.size(); ++i)
            if (breached[i] && distance(target, s.followers[i].position()) < params.R)
                breached[i] = false;
        if (leader_close && distance(target, s.leader) >= params.R - 1e-9) leader_close = false;
    };

    record_events(state);
    result.samples.push_back(state);

    auto add_scaled = [](const SwarmState& base, double factor, const SwarmState& deriv,
                         double t) {
        SwarmState out = base;
        out.t = t;
        for (std::size_t i = 0; i < base.followers.size(); ++i) {
            out.followers[i].x += factor * deriv.followers[i].x;
            out.followers[i].vx += factor * deriv.followers[i].vx;
            out.followers[i].y += factor * deriv.followers[i].y;
            out.followers[i].vy += factor * deriv.followers[i].vy;
        }
        return out;
    };

    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * h;
        const double t1 = (step == n_steps) ? params.T : static_cast<double>(step) * h;
        const double dt = t1 - t0;
        try {
            const SwarmState k1 = system_rhs(t0, state, params, traj, graph, cfg.min_speed);
            const SwarmState s2 = add_scaled(state, dt / 2.0, k1, t0 + dt / 2.0);
            const SwarmState k2 = system_rhs(t0 + dt / 2.0, s2, params, traj, graph, cfg.min_speed);
            const SwarmState s3 = add_scaled(state, dt / 2.0, k2, t0 + dt / 2.0);
            const SwarmState k3 = system_rhs(t0 + dt / 2.0, s3, params, traj, graph, cfg.min_speed);
            const SwarmState s4 = add_scaled(state, dt, k3, t1);
            const SwarmState k4 = system_rhs(t1, s4, params, traj, graph, cfg.min_speed);
            for (std::size_t i = 0; i < state.followers.size(); ++i) {
                auto& f = state.followers[i];
                f.x += dt / 6.0 * (k1.followers[i].x + 2.0 * k2.followers[i].x +
                                   2.0 * k3.followers[i].x + k4.followers[i].x);
                f.vx += dt / 6.0 * (k1.followers[i].vx + 2.0 * k2.followers[i].vx +
                                    2.0 * k3.followers[i].vx + k4.followers[i].vx);
                f.y += dt / 6.0 * (k1.followers[i].y + 2.0 * k2.followers[i].y +
                                   2.0 * k3.followers[i].y + k4.followers[i].y);
                f.vy += dt / 6.0 * (k1.followers[i].vy + 2.0 * k2.followers[i].vy +
                                    2.0 * k3.followers[i].vy + k4.followers[i].vy);
            }
        } catch (const SingularSeparation& e) {
            result.events.push_back({t0, EventKind::Singularity, e.follower});
            result.terminated_early = true;
            break;
        }
        state.t = t1;
        state.leader = leader_state(t1, params, traj).position;

        if (!state.finite()) {
            int agent = -1;
            for (std::size_t i = 0; i < state.followers.size(); ++i)
                if (!state.followers[i].finite()) {
                    agent = static_cast<int>(i);
                    break;
                }
            result.events.push_back({t1, EventKind::Singularity, agent});
            result.terminated_early = true;
            break;
        }

        record_events(state);
        if (step % stride == 0 || step == n_steps) result.samples.push_back(state);
    }

    return result;
}

}  // namespace herdsim
