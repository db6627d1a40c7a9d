#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "herdsim/errors.hpp"
#include "herdsim/graph.hpp"
#include "herdsim/linalg.hpp"
#include "herdsim/params.hpp"
#include "herdsim/vec2.hpp"

namespace herdsim {

// Averaged follower coordinates in the unit-circle normalization (R = 1).
struct AveragedState {
    double x = 0.0;
    double vx = 0.0;
    double y = 0.0;
    double vy = 0.0;
};

// The averaged-force integrand is singular on the unit circle (the leader
// orbit). Inside this radius it stays analytic with enough margin that
// M = 256 trapezoid nodes already converge past 1e-10 for moderate alpha.
inline constexpr double kRhoMax = 0.9;

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Orbit nodes cos/sin(2*pi*j/M) built by mirroring the first half so the
// j <-> M-j reflection symmetry holds bit-exactly; this makes the averaged
// y-force vanish identically on the y = 0 axis instead of to rounding.
inline void orbit_tables(int m, std::vector<double>& cos_t, std::vector<double>& sin_t) {
    cos_t.resize(static_cast<std::size_t>(m));
    sin_t.resize(static_cast<std::size_t>(m));
    const double step = 2.0 * M_PI / m;
    for (int j = 0; j <= m / 2; ++j) {
        cos_t[static_cast<std::size_t>(j)] = std::cos(step * j);
        sin_t[static_cast<std::size_t>(j)] = std::sin(step * j);
    }
    cos_t[0] = 1.0;
    sin_t[0] = 0.0;
    cos_t[static_cast<std::size_t>(m / 2)] = -1.0;
    sin_t[static_cast<std::size_t>(m / 2)] = 0.0;
    for (int j = m / 2 + 1; j < m; ++j) {
        cos_t[static_cast<std::size_t>(j)] = cos_t[static_cast<std::size_t>(m - j)];
        sin_t[static_cast<std::size_t>(j)] = -sin_t[static_cast<std::size_t>(m - j)];
    }
}

}  // namespace detail

// Mean repulsive force over one leader orbit,
//   (1/2pi) * Integral_0^2pi A*(s - orbit(u)) / |s - orbit(u)|^(2*alpha) du,
// by the composite trapezoid rule on M uniform nodes. For this periodic
// analytic integrand the trapezoid rule is spectrally accurate. Kahan
// accumulation keeps the sharp near-orbit peaks from eating the budget.
inline Vec2 averaged_force(double x, double y, const SystemParams& params, int nodes) {
    if (nodes < 16 || (nodes & (nodes - 1)) != 0)
        throw std::invalid_argument("averaged_force: node count must be a power of two >= 16");
    const double rho = std::hypot(x, y);
    if (rho > kRhoMax) throw TooCloseToOrbit(rho, kRhoMax);

    thread_local std::vector<double> cos_t, sin_t;
    thread_local int cached_nodes = 0;
    if (cached_nodes != nodes) {
        detail::orbit_tables(nodes, cos_t, sin_t);
        cached_nodes = nodes;
    }

    // Nodes j and M-j share cos and carry opposite sin, so their
    // contributions are combined before accumulation: on the y = 0 axis the
    // paired y-terms cancel bit-exactly, which is the reflection symmetry the
    // averaged system has.
    detail::KahanSum fx, fy;
    for (int j = 0; j <= nodes / 2; ++j) {
        const double dx = x - cos_t[static_cast<std::size_t>(j)];
        const double s = sin_t[static_cast<std::size_t>(j)];
        const double dy = y - s;
        const double r2 = dx * dx + dy * dy;
        const double w = params.A / std::pow(r2, params.alpha);
        if (j == 0 || j == nodes / 2) {
            fx.add(dx * w);
            fy.add(dy * w);
        } else {
            const double dym = y + s;
            const double r2m = dx * dx + dym * dym;
            const double wm = params.A / std::pow(r2m, params.alpha);
            const double fy_pair = dy * w;
            const double fy_mirror = dym * wm;
            fx.add(dx * w + dx * wm);
            fy.add(fy_pair + fy_mirror);
        }
    }
    return {fx.sum / nodes, fy.sum / nodes};
}

// Averaged vector field f_av: velocity rows pass through exactly, force rows
// are the orbit-averaged repulsion minus damping.
inline std::array<double, 4> averaged_field(const AveragedState& s, const SystemParams& params,
                                            int nodes = 256) {
    const Vec2 f = averaged_force(s.x, s.y, params, nodes);
    return {s.vx, f.x - params.k * s.vx, s.vy, f.y - params.k * s.vy};
}

// Jacobian of f_av at the origin. The force-gradient diagonal entries are
// -A*(alpha - 1); the cross terms average to zero over the orbit.
inline Matrix jacobian_origin(const SystemParams& params) {
    const double g = -params.A * (params.alpha - 1.0);
    Matrix j(4, 4);
    j(0, 1) = 1.0;
    j(1, 0) = g;
    j(1, 1) = -params.k;
    j(2, 3) = 1.0;
    j(3, 2) = g;
    j(3, 3) = -params.k;
    return j;
}

using AveragedField = std::function<std::array<double, 4>(const AveragedState&)>;

// Central-difference Jacobian of a 4-vector field; the independent check on
// jacobian_origin. Propagates TooCloseToOrbit from out-of-range probes.
inline Matrix numeric_jacobian(const AveragedField& f, const AveragedState& s, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("numeric_jacobian: step must be > 0");
    Matrix j(4, 4);
    for (std::size_t col = 0; col < 4; ++col) {
        AveragedState plus = s, minus = s;
        double* pp[] = {&plus.x, &plus.vx, &plus.y, &plus.vy};
        double* pm[] = {&minus.x, &minus.vx, &minus.y, &minus.vy};
        *pp[col] += h;
        *pm[col] -= h;
        const auto fp = f(plus);
        const auto fm = f(minus);
        for (std::size_t row = 0; row < 4; ++row) j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
    }
    return j;
}

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    bool hurwitz = false;
};

namespace detail {

inline void sort_spectrum(std::vector<std::complex<double>>& eig) {
    std::sort(eig.begin(), eig.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

}  // namespace detail

// Spectrum of the averaged Jacobian at the origin:
//   lambda = -k/2 +- (1/2)*sqrt(k^2 - 4*A*(alpha-1)),
// each with multiplicity 2 from the identical x and y blocks. Hurwitz
// exactly when A > 0, alpha > 1, k > 0.
inline Spectrum spectrum_single(const SystemParams& params) {
    const std::complex<double> disc(params.k * params.k -
                                    4.0 * params.A * (params.alpha - 1.0));
    const std::complex<double> root = std::sqrt(disc);
    const std::complex<double> lp = -params.k / 2.0 + 0.5 * root;
    const std::complex<double> lm = -params.k / 2.0 - 0.5 * root;
    Spectrum s;
    s.eigenvalues = {lm, lm, lp, lp};
    detail::sort_spectrum(s.eigenvalues);
    s.hurwitz = params.A > 0.0 && params.alpha > 1.0 && params.k > 0.0;
    return s;
}

// Spectrum of the consensus-coupled averaged Jacobian via the per-mode
// closed form: for each eigenvalue mu of -L,
//   lambda = -k/2 + (gamma*mu +- sqrt((gamma*mu - k)^2 - 4*(beta - mu)))/2,
// beta = A*(alpha-1). Each mode appears twice (identical x and y blocks),
// giving 4n eigenvalues. The formula is taken verbatim and cross-checked
// against a dense eigensolver in the test suite, not re-derived.
inline Spectrum spectrum_consensus(const SystemParams& params, const InteractionGraph& graph,
                                   double gamma_gain) {
    const double beta = params.A * (params.alpha - 1.0);
    auto lap_eigs = symmetric_eigenvalues(laplacian(graph));
    std::vector<double> mu(lap_eigs.size());
    for (std::size_t i = 0; i < lap_eigs.size(); ++i) mu[i] = -lap_eigs[i];
    std::sort(mu.begin(), mu.end());

    Spectrum s;
    s.eigenvalues.reserve(4 * mu.size());
    for (double m : mu) {
        const double gm = gamma_gain * m;
        const std::complex<double> disc((gm - params.k) * (gm - params.k) - 4.0 * (beta - m));
        const std::complex<double> root = std::sqrt(disc);
        const std::complex<double> lp = -params.k / 2.0 + 0.5 * (gm + root);
        const std::complex<double> lm = -params.k / 2.0 + 0.5 * (gm - root);
        for (int block = 0; block < 2; ++block) {
            s.eigenvalues.push_back(lp);
            s.eigenvalues.push_back(lm);
        }
    }
    detail::sort_spectrum(s.eigenvalues);
    s.hurwitz = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                            [](const auto& l) { return l.real() < 0.0; });
    return s;
}

struct StabilityResult {
    bool stable = false;
    double margin = 0.0;  // negated spectral abscissa of the averaged Jacobian
};

// Averaged-origin stability predicate: A > 0, alpha > 1, k > 0.
inline StabilityResult is_confinement_stable(const SystemParams& params) {
    const auto spec = spectrum_single(params);
    double max_re = spec.eigenvalues.front().real();
    for (const auto& l : spec.eigenvalues) max_re = std::max(max_re, l.real());
    return {params.A > 0.0 && params.alpha > 1.0 && params.k > 0.0, -max_re};
}

}  // namespace herdsim
