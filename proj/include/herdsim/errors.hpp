#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace herdsim {

// Follower got within the singular-separation guard of the leader. The
// force law overflows there for large exponents, so this is a hard error
// rather than a clamp.
class SingularSeparation : public std::runtime_error {
public:
    SingularSeparation(double separation, double limit, int follower = -1)
        : std::runtime_error("follower-leader separation " + std::to_string(separation) +
                             " below singular guard " + std::to_string(limit)),
          separation(separation),
          limit(limit),
          follower(follower) {}

    double separation;
    double limit;
    int follower;  // -1 when not raised from a per-follower context
};

// Averaged-field evaluation requested too close to the leader orbit, where
// the quadrature loses its accuracy guarantee.
class TooCloseToOrbit : public std::runtime_error {
public:
    TooCloseToOrbit(double radius, double rho_max)
        : std::runtime_error("averaged state radius " + std::to_string(radius) +
                             " exceeds rho_max " + std::to_string(rho_max)),
          radius(radius),
          rho_max(rho_max) {}

    double radius;
    double rho_max;
};

class OutOfDomain : public std::domain_error {
public:
    explicit OutOfDomain(const std::string& what) : std::domain_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations(std::move(violations)) {}

    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "validation failed:";
        for (const auto& item : v) {
            s += "\n  - " + item;
        }
        return s;
    }
};

}  // namespace herdsim
