#pragma once

#include <cmath>
#include <vector>

#include "herdsim/vec2.hpp"

namespace herdsim {

// One follower's phase-space coordinates, laid out (x, vx, y, vy).
struct FollowerState {
    double x = 0.0;
    double vx = 0.0;
    double y = 0.0;
    double vy = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 velocity() const { return {vx, vy}; }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(vx) && std::isfinite(y) && std::isfinite(vy);
    }

    friend bool operator==(const FollowerState&, const FollowerState&) = default;
};

// Leader pose plus all follower states at one time instant. Also reused as
// the time-derivative carrier by the vector-field evaluation.
struct SwarmState {
    double t = 0.0;
    Vec2 leader;
    std::vector<FollowerState> followers;

    bool finite() const {
        if (!std::isfinite(t) || !is_finite(leader)) return false;
        for (const auto& f : followers)
            if (!f.finite()) return false;
        return true;
    }

    friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

}  // namespace herdsim
