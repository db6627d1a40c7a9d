#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "herdsim/errors.hpp"
#include "herdsim/vec2.hpp"

namespace herdsim {

struct TrajectorySample {
    Vec2 point;
    Vec2 derivative;  // d(gamma)/d(theta)
};

// gamma(theta) = radius * (cos(2*pi*turns*theta), sin(2*pi*turns*theta))
struct CircleTraj {
    double radius = 1.0;
    double turns = 1.0;

    friend bool operator==(const CircleTraj&, const CircleTraj&) = default;
};

// Per-axis wave plus a linear polynomial term, so open curves like
// (a*cos(f*theta), b*theta) are expressible alongside true Lissajous figures.
// x(theta) = ax*cos(2*pi*fx*theta + phase_x) + poly_x[0] + poly_x[1]*theta
// y(theta) = ay*sin(2*pi*fy*theta + phase_y) + poly_y[0] + poly_y[1]*theta
struct LissajousTraj {
    double ax = 0.0;
    double fx = 0.0;
    double ay = 0.0;
    double fy = 0.0;
    double phase_x = 0.0;
    double phase_y = 0.0;
    std::array<double, 2> poly_x{0.0, 0.0};
    std::array<double, 2> poly_y{0.0, 0.0};

    friend bool operator==(const LissajousTraj&, const LissajousTraj&) = default;
};

// Interpolated waypoint curve. Slopes are Fritsch-Carlson shape-preserving
// cubic slopes per coordinate, which keeps the curve C^1 without the
// overshoot a plain cubic spline produces near sharp waypoints.
struct WaypointsTraj {
    std::vector<double> theta;
    std::vector<Vec2> points;
    std::vector<Vec2> slopes;  // d(point)/d(theta) at each waypoint

    friend bool operator==(const WaypointsTraj& a, const WaypointsTraj& b) {
        return a.theta == b.theta && a.points == b.points;
    }
};

namespace detail {

// Shape-preserving slopes for one coordinate (PCHIP / Fritsch-Carlson).
inline std::vector<double> fritsch_carlson_slopes(const std::vector<double>& t,
                                                  const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> m(n, 0.0);
    if (n < 2) return m;

    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t[i + 1] - t[i];
        d[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        m[0] = m[1] = d[0];
        return m;
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0.0) != (d[i] > 0.0)) {
            m[i] = 0.0;  // local extremum: flat tangent avoids overshoot
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }

    // One-sided three-point endpoint formula, clamped to preserve shape.
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double m0 = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if ((m0 > 0.0) != (d0 > 0.0) || d0 == 0.0) {
            m0 = 0.0;
        } else if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m0) > 3.0 * std::abs(d0)) {
            m0 = 3.0 * d0;
        }
        return m0;
    };
    m[0] = endpoint(h[0], h[1], d[0], d[1]);
    m[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    return m;
}

}  // namespace detail

// Target curve gamma : [0,1] -> R^2 with an evaluable derivative.
class TrajectorySpec {
public:
    using Variant = std::variant<CircleTraj, LissajousTraj, WaypointsTraj>;

    TrajectorySpec() : v_(CircleTraj{0.0, 1.0}) {}
    explicit TrajectorySpec(Variant v) : v_(std::move(v)) {}

    static TrajectorySpec circle(double radius, double turns = 1.0) {
        return TrajectorySpec(CircleTraj{radius, turns});
    }

    static TrajectorySpec lissajous(LissajousTraj lt) { return TrajectorySpec(std::move(lt)); }

    static TrajectorySpec waypoints(const std::vector<std::pair<double, Vec2>>& pts) {
        WaypointsTraj w;
        w.theta.reserve(pts.size());
        w.points.reserve(pts.size());
        for (const auto& [th, p] : pts) {
            w.theta.push_back(th);
            w.points.push_back(p);
        }
        auto violations = waypoint_violations(w);
        if (!violations.empty()) throw ValidationError(std::move(violations));

        std::vector<double> xs(w.points.size()), ys(w.points.size());
        for (std::size_t i = 0; i < w.points.size(); ++i) {
            xs[i] = w.points[i].x;
            ys[i] = w.points[i].y;
        }
        auto mx = detail::fritsch_carlson_slopes(w.theta, xs);
        auto my = detail::fritsch_carlson_slopes(w.theta, ys);
        w.slopes.resize(w.points.size());
        for (std::size_t i = 0; i < w.points.size(); ++i) w.slopes[i] = {mx[i], my[i]};
        return TrajectorySpec(std::move(w));
    }

    const Variant& variant() const { return v_; }

    Vec2 point(double theta) const { return sample(theta).point; }
    Vec2 derivative(double theta) const { return sample(theta).derivative; }

    TrajectorySample sample(double theta) const {
        if (!(theta >= 0.0 && theta <= 1.0))
            throw OutOfDomain("trajectory parameter " + std::to_string(theta) +
                              " outside [0, 1]");
        return std::visit([theta](const auto& traj) { return eval(traj, theta); }, v_);
    }

    friend bool operator==(const TrajectorySpec&, const TrajectorySpec&) = default;

private:
    static std::vector<std::string> waypoint_violations(const WaypointsTraj& w) {
        std::vector<std::string> v;
        if (w.theta.size() < 2) v.push_back("waypoints: need at least 2 points");
        if (!w.theta.empty() && w.theta.front() != 0.0) v.push_back("waypoints: first theta must be 0");
        if (!w.theta.empty() && w.theta.back() != 1.0) v.push_back("waypoints: last theta must be 1");
        for (std::size_t i = 0; i + 1 < w.theta.size(); ++i)
            if (!(w.theta[i] < w.theta[i + 1])) {
                v.push_back("waypoints: theta values must be strictly increasing");
                break;
            }
        return v;
    }

    static TrajectorySample eval(const CircleTraj& c, double theta) {
        const double w = 2.0 * M_PI * c.turns;
        const double a = w * theta;
        return {{c.radius * std::cos(a), c.radius * std::sin(a)},
                {-c.radius * w * std::sin(a), c.radius * w * std::cos(a)}};
    }

    static TrajectorySample eval(const LissajousTraj& l, double theta) {
        const double wx = 2.0 * M_PI * l.fx;
        const double wy = 2.0 * M_PI * l.fy;
        const double px = wx * theta + l.phase_x;
        const double py = wy * theta + l.phase_y;
        return {{l.ax * std::cos(px) + l.poly_x[0] + l.poly_x[1] * theta,
                 l.ay * std::sin(py) + l.poly_y[0] + l.poly_y[1] * theta},
                {-l.ax * wx * std::sin(px) + l.poly_x[1],
                 l.ay * wy * std::cos(py) + l.poly_y[1]}};
    }

    static TrajectorySample eval(const WaypointsTraj& w, double theta) {
        // Hermite segment lookup; theta is already range-checked.
        std::size_t i = 0;
        while (i + 2 < w.theta.size() && theta >= w.theta[i + 1]) ++i;
        const double h = w.theta[i + 1] - w.theta[i];
        const double s = (theta - w.theta[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        const double g00 = 6.0 * s2 - 6.0 * s;
        const double g10 = 3.0 * s2 - 4.0 * s + 1.0;
        const double g01 = -g00;
        const double g11 = 3.0 * s2 - 2.0 * s;
        const Vec2 p0 = w.points[i], p1 = w.points[i + 1];
        const Vec2 m0 = h * w.slopes[i], m1 = h * w.slopes[i + 1];
        return {h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1,
                (g00 * p0 + g10 * m0 + g01 * p1 + g11 * m1) / h};
    }

    Variant v_;
};

inline TrajectorySample eval_trajectory(const TrajectorySpec& traj, double theta) {
    return traj.sample(theta);
}

}  // namespace herdsim
