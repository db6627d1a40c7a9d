#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "herdsim/averaging.hpp"
#include "herdsim/rng.hpp"
#include "support/eigen_oracle.hpp"

using namespace herdsim;

namespace {

SystemParams params_with(double A, double k, double alpha) {
    SystemParams p;
    p.A = A;
    p.k = k;
    p.alpha = alpha;
    return p;
}

}  // namespace

TEST_CASE("averaged field at documented states", "[averaging]") {
    const SystemParams p = params_with(1.0, 1.0, 2.0);

    SECTION("the origin is an equilibrium") {
        const auto f = averaged_field({0, 0, 0, 0}, p);
        CHECK(f[0] == 0.0);
        CHECK(std::abs(f[1]) < 1e-13);
        CHECK(f[2] == 0.0);
        CHECK(std::abs(f[3]) < 1e-13);
    }

    SECTION("at the center only damping acts on a moving state") {
        const auto f = averaged_field({0, 1, 0, 0}, p);
        CHECK(f[0] == 1.0);
        CHECK(f[1] == Catch::Approx(-p.k).margin(1e-13));
        CHECK(f[2] == 0.0);
        CHECK(std::abs(f[3]) < 1e-13);
    }

    SECTION("on the x axis the y force vanishes identically") {
        const auto f = averaged_field({0.5, 0, 0, 0}, p);
        CHECK(f[3] == 0.0);  // exact by the mirror-paired quadrature
    }

    SECTION("x force matches a high-resolution reference") {
        const auto coarse = averaged_field({0.5, 0, 0, 0}, p, 256);
        const auto reference = averaged_field({0.5, 0, 0, 0}, p, 65536);
        CHECK(coarse[1] == Catch::Approx(reference[1]).margin(1e-10));
    }
}

TEST_CASE("averaged field guards its domain", "[averaging]") {
    const SystemParams p = params_with(1.0, 1.0, 2.0);
    CHECK_THROWS_AS(averaged_field({0.95, 0, 0, 0}, p), TooCloseToOrbit);
    CHECK_THROWS_AS(averaged_field({0.7, 0, 0.7, 0}, p), TooCloseToOrbit);
    CHECK_NOTHROW(averaged_field({0.9, 0, 0, 0}, p));
    CHECK_THROWS_AS(averaged_field({0, 0, 0, 0}, p, 100), std::invalid_argument);
    CHECK_THROWS_AS(averaged_field({0, 0, 0, 0}, p, 8), std::invalid_argument);
}

TEST_CASE("quadrature converges exponentially inside rho = 0.8", "[averaging]") {
    for (double alpha : {1.5, 2.0, 4.0}) {
        for (double A : {1.0, 2.0}) {
            const SystemParams p = params_with(A, 1.0, alpha);
            for (double rho : {0.3, 0.6, 0.8}) {
                for (double angle : {0.0, 0.9, 2.2}) {
                    const AveragedState s{rho * std::cos(angle), 0.1, rho * std::sin(angle),
                                          -0.2};
                    const auto f256 = averaged_field(s, p, 256);
                    const auto f512 = averaged_field(s, p, 512);
                    for (int row = 0; row < 4; ++row)
                        CHECK(std::abs(f256[row] - f512[row]) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("averaged field is rotation equivariant", "[averaging]") {
    const SystemParams p = params_with(1.0, 0.5, 2.0);
    SplitMix64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const double rho = rng.next_in(0.0, 0.8);
        const double base = rng.next_in(0, 2 * M_PI);
        const double angle = rng.next_in(0, 2 * M_PI);
        const Vec2 pos{rho * std::cos(base), rho * std::sin(base)};
        const Vec2 vel{rng.next_in(-1, 1), rng.next_in(-1, 1)};

        const auto f = averaged_field({pos.x, vel.x, pos.y, vel.y}, p, 512);
        const Vec2 rp = rotated(pos, angle), rv = rotated(vel, angle);
        const auto g = averaged_field({rp.x, rv.x, rp.y, rv.y}, p, 512);

        const Vec2 pos_row = rotated({f[0], f[2]}, angle);
        const Vec2 force_row = rotated({f[1], f[3]}, angle);
        CHECK(g[0] == Catch::Approx(pos_row.x).margin(1e-9));
        CHECK(g[2] == Catch::Approx(pos_row.y).margin(1e-9));
        CHECK(g[1] == Catch::Approx(force_row.x).margin(1e-9));
        CHECK(g[3] == Catch::Approx(force_row.y).margin(1e-9));
    }
}

TEST_CASE("analytic Jacobian at the origin", "[averaging]") {
    SECTION("closed-form entries") {
        const Matrix j = jacobian_origin(params_with(1.0, 0.05, 10.0));
        CHECK(j(1, 0) == -9.0);
        CHECK(j(3, 2) == -9.0);
        CHECK(j(0, 1) == 1.0);
        CHECK(j(2, 3) == 1.0);
        CHECK(j(1, 1) == -0.05);
        CHECK(j(1, 2) == 0.0);
        CHECK(j(3, 0) == 0.0);
    }
    SECTION("alpha = 1 zeroes the force gradient") {
        const Matrix j = jacobian_origin(params_with(2.0, 1.0, 1.0));
        CHECK(j(1, 0) == 0.0);
        CHECK(j(3, 2) == 0.0);
    }
    SECTION("matches the central-difference Jacobian of the averaged field") {
        for (const auto& p : {params_with(1.0, 0.05, 10.0), params_with(2.0, 1.0, 1.5),
                              params_with(0.5, 0.03, 4.0)}) {
            const auto field = [&](const AveragedState& s) {
                return averaged_field(s, p, 4096);
            };
            const Matrix fd = numeric_jacobian(field, {0, 0, 0, 0}, 1e-5);
            CHECK((jacobian_origin(p) - fd).max_abs() < 1e-6);
        }
    }
}

TEST_CASE("numeric Jacobian recovers known fields", "[averaging]") {
    SECTION("a linear field returns its matrix") {
        Matrix m(4, 4);
        SplitMix64 rng(3);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = rng.next_in(-2, 2);
        const auto field = [&](const AveragedState& s) {
            std::array<double, 4> v{s.x, s.vx, s.y, s.vy};
            std::array<double, 4> out{};
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) out[i] += m(i, j) * v[j];
            return out;
        };
        const Matrix fd = numeric_jacobian(field, {0.1, -0.2, 0.05, 0.3}, 1e-6);
        CHECK((fd - m).max_abs() < 1e-8);
    }
    SECTION("a constant field has a zero Jacobian") {
        const auto field = [](const AveragedState&) {
            return std::array<double, 4>{1.0, -2.0, 3.0, 4.0};
        };
        const Matrix fd = numeric_jacobian(field, {0, 0, 0, 0}, 1e-6);
        CHECK(fd.max_abs() == 0.0);
    }
    SECTION("rejects a non-positive step") {
        const auto field = [](const AveragedState&) { return std::array<double, 4>{}; };
        CHECK_THROWS_AS(numeric_jacobian(field, {0, 0, 0, 0}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("closed-form spectrum of the averaged Jacobian", "[averaging]") {
    SECTION("oscillatory case pins the documented eigenvalues") {
        const auto s = spectrum_single(params_with(1.0, 0.05, 10.0));
        REQUIRE(s.eigenvalues.size() == 4);
        const double im = std::sqrt(4.0 * 9.0 - 0.05 * 0.05) / 2.0;  // 2.999896...
        CHECK(s.eigenvalues[0].real() == Catch::Approx(-0.025).margin(1e-15));
        CHECK(s.eigenvalues[0].imag() == Catch::Approx(-im).epsilon(1e-13));
        CHECK(s.eigenvalues[3].imag() == Catch::Approx(im).epsilon(1e-13));
        CHECK(s.eigenvalues[1] == s.eigenvalues[0]);
        CHECK(s.eigenvalues[2] == s.eigenvalues[3]);
        CHECK(s.hurwitz);
    }
    SECTION("overdamped case splits into two real pairs") {
        const auto s = spectrum_single(params_with(1.0, 2.0, 1.25));
        CHECK(s.eigenvalues.front().real() ==
              Catch::Approx(-1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-14));
        CHECK(s.eigenvalues.back().real() ==
              Catch::Approx(-1.0 + std::sqrt(3.0) / 2.0).epsilon(1e-14));
        CHECK(s.eigenvalues.front().imag() == 0.0);
        CHECK(s.hurwitz);
    }
    SECTION("alpha = 1 sits on the stability boundary") {
        const auto s = spectrum_single(params_with(1.0, 0.7, 1.0));
        CHECK(s.eigenvalues.front().real() == Catch::Approx(-0.7).margin(1e-15));
        CHECK(s.eigenvalues.back().real() == Catch::Approx(0.0).margin(1e-15));
        CHECK_FALSE(s.hurwitz);
    }
    SECTION("matches the dense eigensolver on the analytic Jacobian") {
        for (const auto& p : {params_with(1.0, 0.05, 10.0), params_with(1.0, 2.0, 1.25),
                              params_with(0.5, 1.0, 4.0)}) {
            const auto mine = spectrum_single(p).eigenvalues;
            const auto want = oracle::dense_eigenvalues(jacobian_origin(p));
            REQUIRE(mine.size() == want.size());
            for (std::size_t i = 0; i < mine.size(); ++i)
                CHECK(std::abs(mine[i] - want[i]) < 1e-10);
        }
    }
}

TEST_CASE("graph Laplacian", "[averaging]") {
    SECTION("edgeless graph gives the zero matrix") {
        const Matrix L = laplacian(InteractionGraph::edgeless(3));
        CHECK(L.max_abs() == 0.0);
    }
    SECTION("single edge") {
        const Matrix L = laplacian(InteractionGraph(2, {{0, 1}}));
        CHECK(L(0, 0) == 1.0);
        CHECK(L(1, 1) == 1.0);
        CHECK(L(0, 1) == -1.0);
        CHECK(L(1, 0) == -1.0);
    }
    SECTION("complete graph on three nodes has spectrum {0, 3, 3}") {
        const auto eig = symmetric_eigenvalues(laplacian(InteractionGraph::complete(3)));
        REQUIRE(eig.size() == 3);
        CHECK(eig[0] == Catch::Approx(0.0).margin(1e-12));
        CHECK(eig[1] == Catch::Approx(3.0).margin(1e-12));
        CHECK(eig[2] == Catch::Approx(3.0).margin(1e-12));
    }
}

TEST_CASE("consensus-coupled spectrum", "[averaging]") {
    SECTION("edgeless coupling reduces to the single-follower spectrum") {
        const SystemParams p = params_with(1.0, 0.05, 10.0);
        const auto single = spectrum_single(p);
        const auto coupled = spectrum_consensus(p, InteractionGraph::edgeless(3), 1.0);
        REQUIRE(coupled.eigenvalues.size() == 12);
        for (const auto& l : coupled.eigenvalues) {
            const bool matches_one =
                std::abs(l - single.eigenvalues.front()) < 1e-14 ||
                std::abs(l - single.eigenvalues.back()) < 1e-14;
            CHECK(matches_one);
        }
    }

    SECTION("two coupled followers match the dense block eigensolver") {
        // beta = A*(alpha-1) = 1 with A = 1, alpha = 2.
        const SystemParams p = params_with(1.0, 1.0, 2.0);
        const InteractionGraph g(2, {{0, 1}});
        const auto mine = spectrum_consensus(p, g, 1.0);
        auto block = oracle::dense_eigenvalues(oracle::consensus_block(1.0, 1.0, 1.0, g));
        // Each block eigenvalue appears once per coordinate block.
        std::vector<std::complex<double>> want;
        for (const auto& l : block) {
            want.push_back(l);
            want.push_back(l);
        }
        want = oracle::sorted(std::move(want));
        REQUIRE(mine.eigenvalues.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i)
            CHECK(std::abs(mine.eigenvalues[i] - want[i]) < 1e-10);
        CHECK(mine.hurwitz);
    }

    SECTION("random graphs stay Hurwitz and match the oracle") {
        SplitMix64 rng(2024);
        for (int trial = 0; trial < 25; ++trial) {
            const int n = 1 + static_cast<int>(rng.next_u64() % 6);
            std::vector<std::pair<int, int>> edges;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng.next_unit() < 0.5) edges.emplace_back(i, j);
            const InteractionGraph g(n, edges);
            const double beta = rng.next_in(0.05, 5.0);
            const double k = rng.next_in(0.05, 5.0);
            const double gamma_gain = rng.next_in(0.05, 5.0);
            const SystemParams p = params_with(beta, k, 2.0);  // A*(alpha-1) = beta

            const auto mine = spectrum_consensus(p, g, gamma_gain);
            auto block =
                oracle::dense_eigenvalues(oracle::consensus_block(beta, k, gamma_gain, g));
            std::vector<std::complex<double>> want;
            for (const auto& l : block) {
                want.push_back(l);
                want.push_back(l);
            }
            want = oracle::sorted(std::move(want));
            REQUIRE(mine.eigenvalues.size() == want.size());
            for (std::size_t i = 0; i < want.size(); ++i)
                CHECK(std::abs(mine.eigenvalues[i] - want[i]) < 1e-8);
            CHECK(mine.hurwitz);
        }
    }
}

TEST_CASE("stability predicate and margin", "[averaging]") {
    SECTION("documented stable case") {
        const auto r = is_confinement_stable(params_with(1.0, 0.03, 5.0));
        CHECK(r.stable);
        CHECK(r.margin == Catch::Approx(0.015).margin(1e-15));
    }
    SECTION("boundary violations") {
        CHECK_FALSE(is_confinement_stable(params_with(1.0, 0.5, 0.5)).stable);
        CHECK_FALSE(is_confinement_stable(params_with(1.0, 0.0, 5.0)).stable);
        CHECK_FALSE(is_confinement_stable(params_with(0.0, 0.5, 5.0)).stable);
    }
    SECTION("predicate agrees with the spectrum's hurwitz flag") {
        SplitMix64 rng(41);
        for (int trial = 0; trial < 200; ++trial) {
            const SystemParams p = params_with(rng.next_in(0.01, 3.0), rng.next_in(0.01, 3.0),
                                               rng.next_in(0.2, 12.0));
            CHECK(is_confinement_stable(p).stable == spectrum_single(p).hurwitz);
        }
    }
}
