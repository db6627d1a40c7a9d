#pragma once

#include <cmath>
#include <optional>

#include "herdsim/errors.hpp"
#include "herdsim/graph.hpp"
#include "herdsim/params.hpp"
#include "herdsim/state.hpp"
#include "herdsim/trajectory.hpp"
#include "herdsim/vec2.hpp"

namespace herdsim {

// Repulsive acceleration A*(p_f - p_l)/|p_f - p_l|^(2*alpha) - k*v_f felt by a
// follower. Throws SingularSeparation below the guard radius instead of
// clamping, so near-collisions surface as hard failures.
inline Vec2 follower_accel(Vec2 p_f, Vec2 v_f, Vec2 p_l, const SystemParams& params,
                           int follower = -1) {
    const Vec2 d = p_f - p_l;
    const double r2 = norm_squared(d);
    const double guard = params.min_separation();
    if (!(r2 >= guard * guard))
        throw SingularSeparation(std::sqrt(r2), guard, follower);
    const double inv_pow = params.A / std::pow(r2, params.alpha);
    return inv_pow * d - params.k * v_f;
}

// Leader velocity input: fast unit-circle sweep plus the slow drift that
// drags the orbit center along gamma. delta = 1/T throughout.
inline Vec2 leader_control(double t, const SystemParams& params, const TrajectorySpec& traj) {
    const double delta = params.delta();
    const double a = params.omega * t + params.phi;
    const Vec2 gdot = traj.derivative(delta * t);
    return {-params.omega * std::sin(a) + delta * gdot.x,
            params.omega * std::cos(a) + delta * gdot.y};
}

struct LeaderState {
    Vec2 position;
    Vec2 velocity;
};

// Closed-form leader pose: gamma(t/T) plus a radius-R circle. The leader is
// kinematic, so integrating its ODE would only add drift; the closed form
// keeps the leader-on-circle identity exact.
inline LeaderState leader_state(double t, const SystemParams& params,
                                const TrajectorySpec& traj) {
    const double delta = params.delta();
    const double a = params.omega * t + params.phi;
    const auto [g, gdot] = traj.sample(delta * t);
    const double c = std::cos(a), s = std::sin(a);
    return {{g.x + params.R * c, g.y + params.R * s},
            {delta * gdot.x - params.R * params.omega * s,
             delta * gdot.y + params.R * params.omega * c}};
}

// Consensus coupling increment for follower i: negative sums of position and
// velocity disagreements with its graph neighbors. Unit gains, as in the
// coupled dynamics; zero for isolated nodes.
inline Vec2 consensus_accel(int i, const SwarmState& state, const InteractionGraph& graph) {
    const auto& fi = state.followers[static_cast<std::size_t>(i)];
    Vec2 acc{0.0, 0.0};
    for (auto [a, b] : graph.edges) {
        const int j = (a == i) ? b : (b == i) ? a : -1;
        if (j < 0) continue;
        const auto& fj = state.followers[static_cast<std::size_t>(j)];
        acc -= (fi.position() - fj.position());
        acc -= (fi.velocity() - fj.velocity());
    }
    return acc;
}

// Scales the repulsion amplitude so the force magnitude is 1 at separation
// R_L: A = R_L^(2*alpha - 1).
inline double amplitude_for_radius(double R_L, double alpha) {
    return std::pow(R_L, 2.0 * alpha - 1.0);
}

// Full system vector field. The leader position comes from the closed form,
// never from the state argument; followers interact only through the
// optional consensus graph. min_speed > 0 freezes a follower's position rate
// below that speed (motor-deadband fidelity knob, default off).
inline SwarmState system_rhs(double t, const SwarmState& state, const SystemParams& params,
                             const TrajectorySpec& traj,
                             const InteractionGraph* graph = nullptr,
                             double min_speed = 0.0) {
    const LeaderState lead = leader_state(t, params, traj);
    SwarmState deriv;
    deriv.t = 1.0;
    deriv.leader = lead.velocity;
    deriv.followers.resize(state.followers.size());
    for (std::size_t i = 0; i < state.followers.size(); ++i) {
        const auto& f = state.followers[i];
        Vec2 acc = follower_accel(f.position(), f.velocity(), lead.position, params,
                                  static_cast<int>(i));
        if (graph) acc += consensus_accel(static_cast<int>(i), state, *graph);
        const bool moving = min_speed <= 0.0 || norm(f.velocity()) >= min_speed;
        deriv.followers[i] = {moving ? f.vx : 0.0, acc.x, moving ? f.vy : 0.0, acc.y};
    }
    return deriv;
}

}  // namespace herdsim
