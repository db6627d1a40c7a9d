#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "herdsim/errors.hpp"

namespace herdsim {

// Physical and control constants governing one run. The trajectory dilation
// rate delta is always 1/T, never stored on its own, so the mission horizon
// and the dilation cannot drift apart.
struct SystemParams {
    double A = 1.0;       // repulsion amplitude
    double k = 1.0;       // velocity damping coefficient
    double alpha = 2.0;   // potential exponent, > 1 for a stable averaged origin
    double omega = 10.0;  // leader oscillation angular frequency
    double T = 1.0;       // mission duration
    double R = 1.0;       // confinement radius = leader orbit radius
    int N = 1;            // follower count
    double phi = 0.0;     // leader initial phase

    double delta() const { return 1.0 / T; }

    // Separation below this is treated as singular; the force law overflows
    // there for large alpha. Error, don't clamp: confinement failures stay loud.
    double min_separation() const { return 1e-6 * R; }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Violations of the parameter invariants, empty when valid. Strict positivity
// is what scenario loading enforces; analysis code accepts degenerate values
// (A = 0, alpha <= 1) so that limiting cases stay probeable.
inline std::vector<std::string> validate(const SystemParams& p) {
    std::vector<std::string> v;
    auto finite_positive = [&](double value, const char* name) {
        if (!(std::isfinite(value) && value > 0.0))
            v.push_back(std::string(name) + " must be finite and > 0");
    };
    finite_positive(p.A, "A");
    finite_positive(p.k, "k");
    finite_positive(p.alpha, "alpha");
    finite_positive(p.omega, "omega");
    finite_positive(p.T, "T");
    finite_positive(p.R, "R");
    if (p.N < 1) v.push_back("N must be >= 1");
    if (!std::isfinite(p.phi)) v.push_back("phi must be finite");
    return v;
}

inline void validate_or_throw(const SystemParams& p) {
    auto v = validate(p);
    if (!v.empty()) throw ValidationError(std::move(v));
}

}  // namespace herdsim
