#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "shockflow/hamiltonian.hpp"
#include "shockflow/lagrangian.hpp"
#include "shockflow/rng.hpp"
#include "test_util.hpp"

using namespace shockflow;
using testutil::as_custom;
using testutil::fd_grad;
using testutil::random_spd;

namespace {

std::vector<HamiltonianModel> cataloged_models(std::size_t d, Rng& rng) {
    std::vector<HamiltonianModel> ms;
    ms.push_back(HamiltonianModel::quadratic_identity(d));
    ms.push_back(HamiltonianModel::quadratic(random_spd(d, rng)));
    ms.push_back(HamiltonianModel::relativistic(d));
    ms.push_back(HamiltonianModel::power_law(d, 3.0));
    ms.push_back(HamiltonianModel::power_law(d, 4.0));
    ms.push_back(HamiltonianModel::quad_quartic(d, 1.0));
    ms.push_back(HamiltonianModel::quad_quartic(d, 0.0));
    return ms;
}

}  // namespace

TEST_CASE("lagrangian_value on cataloged kinds") {
    SECTION("quadratic identity: L(v) = |v|^2/2") {
        auto h = HamiltonianModel::quadratic_identity(2);
        LagrangianView lag(h);
        CHECK(lag.value({3.0, 4.0}) == Catch::Approx(12.5).epsilon(1e-12));
    }
    SECTION("relativistic: L(0) = -1") {
        auto h = HamiltonianModel::relativistic(2);
        LagrangianView lag(h);
        CHECK(lag.value({0.0, 0.0}) == Catch::Approx(-1.0).epsilon(1e-12));
    }
    SECTION("power alpha=4: L(1,0) from a brute-force conjugation oracle") {
        auto h = HamiltonianModel::power_law(2, 4.0);
        LagrangianView lag(h);
        // oracle: coarse grid max of p.v - |p|^4/4, then Newton refinement
        const Vec v{1.0, 0.0};
        double best = -1e300;
        Vec bestp(2);
        for (double px = -3.0; px <= 3.0; px += 1e-3) {
            // the maximizer is on the v-axis by symmetry; scan that axis densely
            const double r2 = px * px;
            const double val = px * v[0] - 0.25 * r2 * r2;
            if (val > best) {
                best = val;
                bestp = Vec{px, 0.0};
            }
        }
        for (int it = 0; it < 50; ++it) {  // 1-d Newton on p^3 = 1
            const double p = bestp[0];
            bestp[0] = p - (p * p * p - 1.0) / (3.0 * p * p);
        }
        const double oracle = bestp[0] - 0.25 * std::pow(bestp[0], 4.0);
        CHECK(oracle == Catch::Approx(0.75).epsilon(1e-9));
        CHECK(lag.value(v) == Catch::Approx(oracle).epsilon(1e-10));
    }
    SECTION("relativistic domain error at |v| >= 1") {
        auto h = HamiltonianModel::relativistic(1);
        LagrangianView lag(h);
        CHECK_THROWS_AS(lag.value({1.0}), DomainError);
        CHECK_THROWS_AS(lag.value({1.5}), DomainError);
    }
}

TEST_CASE("velocity_of_momentum") {
    SECTION("quadratic identity is the identity map") {
        auto h = HamiltonianModel::quadratic_identity(3);
        LagrangianView lag(h);
        const Vec v = lag.velocity_of_momentum({1.0, 0.0, 1.0});
        CHECK(dist(v, {1.0, 0.0, 1.0}) < 1e-15);
    }
    SECTION("relativistic at the origin") {
        auto h = HamiltonianModel::relativistic(2);
        LagrangianView lag(h);
        CHECK(norm(lag.velocity_of_momentum({0.0, 0.0})) == 0.0);
    }
    SECTION("relativistic p=(3,4) agrees with finite differences") {
        auto h = HamiltonianModel::relativistic(2);
        const Vec p{3.0, 4.0};
        const Vec g = h.grad(p);
        const double s26 = std::sqrt(26.0);
        CHECK(dist(g, {3.0 / s26, 4.0 / s26}) < 1e-12);
        const Vec gfd = fd_grad([&](const Vec& q) { return h.value(q); }, p);
        CHECK(dist(g, gfd) < 1e-8);
    }
}

TEST_CASE("momentum_of_velocity") {
    SECTION("quadratic identity") {
        auto h = HamiltonianModel::quadratic_identity(2);
        LagrangianView lag(h);
        CHECK(dist(lag.momentum_of_velocity({2.0, -1.0}), {2.0, -1.0}) < 1e-15);
    }
    SECTION("relativistic v=(0.6,0): bisection oracle for p/sqrt(1+p^2)=0.6") {
        double lo = 0.0, hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (mid / std::sqrt(1.0 + mid * mid) < 0.6 ? lo : hi) = mid;
        }
        CHECK(0.5 * (lo + hi) == Catch::Approx(0.75).epsilon(1e-12));
        auto h = HamiltonianModel::relativistic(2);
        LagrangianView lag(h);
        CHECK(dist(lag.momentum_of_velocity({0.6, 0.0}), {0.75, 0.0}) < 1e-12);
    }
    SECTION("power alpha=4, v=(8,0): |p|^2 p = v has root 2") {
        auto h = HamiltonianModel::power_law(2, 4.0);
        LagrangianView lag(h);
        CHECK(dist(lag.momentum_of_velocity({8.0, 0.0}), {2.0, 0.0}) < 1e-12);
    }
    SECTION("round trip velocity(momentum(v)) = v within 1e-8") {
        Rng rng(71);
        for (std::size_t d : {1u, 2u, 3u}) {
            for (const auto& h : cataloged_models(d, rng)) {
                LagrangianView lag(h);
                for (int k = 0; k < 20; ++k) {
                    Vec v = rng.uniform_vec(d, -2.0, 2.0);
                    if (h.kind() == HamiltonianKind::relativistic) v *= 0.45 / 2.0;
                    const Vec p = lag.momentum_of_velocity(v);
                    CHECK(dist(lag.velocity_of_momentum(p), v) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("bregman_divergence") {
    SECTION("quadratic reduces to half squared distance") {
        auto h = HamiltonianModel::quadratic_identity(2);
        LagrangianView lag(h);
        CHECK(lag.bregman({1.0, 1.0}, {0.0, 0.0}) == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("zero at equal arguments") {
        Rng rng(5);
        for (const auto& h : cataloged_models(2, rng)) {
            LagrangianView lag(h);
            Vec v = rng.uniform_vec(2, -0.4, 0.4);
            CHECK(std::abs(lag.bregman(v, v)) < 1e-12);
        }
    }
    SECTION("power alpha=4, d=1, v=1, w=2: high-precision formula oracle") {
        // D = (3/4) 1^{4/3} - (3/4) 2^{4/3} - 2^{1/3} (1 - 2)
        const long double c = std::cbrt((long double)2.0L);
        const long double oracle = 0.75L - 0.75L * c * c * c * c + c;
        auto h = HamiltonianModel::power_law(1, 4.0);
        LagrangianView lag(h);
        const double d = lag.bregman({1.0}, {2.0});
        CHECK(d == Catch::Approx((double)oracle).epsilon(1e-12));
        CHECK(d == Catch::Approx(0.1200394750525634).epsilon(1e-10));
    }
    SECTION("local strong convexity lower bound") {
        Rng rng(9);
        for (const auto& h : cataloged_models(2, rng)) {
            LagrangianView lag(h);
            for (int k = 0; k < 30; ++k) {
                Vec w = rng.uniform_vec(2, -0.4, 0.4);
                Vec dv = rng.uniform_vec(2, -1.0, 1.0);
                dv *= 1e-3 / norm(dv);
                const Vec v = w + dv;
                const double c = min_eigenvalue_sym(lag.hessian(w));
                REQUIRE(c > 0.0);
                CHECK(lag.bregman(v, w) >= 0.45 * c * norm2(dv));
            }
        }
    }
    SECTION("domain error outside dom L") {
        auto h = HamiltonianModel::relativistic(1);
        LagrangianView lag(h);
        CHECK_THROWS_AS(lag.bregman({2.0}, {0.0}), DomainError);
    }
}

TEST_CASE("young_gap") {
    auto h = HamiltonianModel::quadratic_identity(2);
    LagrangianView lag(h);
    SECTION("legendre pair gives zero") {
        CHECK(std::abs(lag.young_gap({1.0, 2.0}, {1.0, 2.0})) < 1e-12);
    }
    SECTION("orthogonal pair gives 1") {
        CHECK(lag.young_gap({1.0, 0.0}, {0.0, 1.0}) == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("relativistic at rest: -1 + 1 - 0") {
        auto hr = HamiltonianModel::relativistic(2);
        LagrangianView lr(hr);
        CHECK(std::abs(lr.young_gap({0.0, 0.0}, {0.0, 0.0})) < 1e-12);
    }
}

TEST_CASE("Fenchel-Young inequality holds on random pairs") {
    Rng rng(2026);
    for (std::size_t d : {1u, 2u, 3u}) {
        for (const auto& h : cataloged_models(d, rng)) {
            LagrangianView lag(h);
            const int trials = 10000 / 3;
            for (int k = 0; k < trials; ++k) {
                Vec v = rng.uniform_vec(d, -2.5, 2.5);
                if (h.kind() == HamiltonianKind::relativistic) v *= 0.99 / (norm(v) + 1e-9);
                const Vec p = rng.uniform_vec(d, -2.5, 2.5);
                REQUIRE(lag.young_gap(v, p) >= -1e-10);
            }
            // equality on Legendre pairs
            for (int k = 0; k < 50; ++k) {
                Vec v = rng.uniform_vec(d, -1.5, 1.5);
                if (h.kind() == HamiltonianKind::relativistic) v *= 0.5 / (norm(v) + 1e-9);
                const Vec p = lag.momentum_of_velocity(v);
                REQUIRE(std::abs(lag.young_gap(v, p)) < 1e-8);
            }
        }
    }
}

TEST_CASE("double conjugation: iterative custom matches closed forms") {
    Rng rng(13);
    for (std::size_t d : {1u, 2u, 3u}) {
        std::vector<HamiltonianModel> ms;
        ms.push_back(HamiltonianModel::quadratic(random_spd(d, rng)));
        ms.push_back(HamiltonianModel::power_law(d, 4.0));
        ms.push_back(HamiltonianModel::quad_quartic(d, 0.7));
        for (const auto& h : ms) {
            const auto hc = as_custom(h);
            LagrangianView exact(h), iter(hc);
            for (int k = 0; k < 25; ++k) {
                const Vec v = rng.uniform_vec(d, -2.0, 2.0);
                REQUIRE(iter.value(v) == Catch::Approx(exact.value(v)).margin(1e-8));
            }
        }
    }
}

TEST_CASE("model invariants: strict convexity and gradient consistency") {
    Rng rng(37);
    for (std::size_t d : {1u, 2u, 3u}) {
        for (const auto& h : cataloged_models(d, rng)) {
            for (int k = 0; k < 60; ++k) {
                Vec p = rng.uniform_vec(d, -2.0, 2.0);
                Vec q = rng.uniform_vec(d, -2.0, 2.0);
                if (dist(p, q) < 1e-6) continue;
                const double mid = h.value(0.5 * (p + q));
                REQUIRE(mid < 0.5 * (h.value(p) + h.value(q)) + 1e-15);

                const Vec g = h.grad(p);
                const Vec gfd = fd_grad([&](const Vec& z) { return h.value(z); }, p);
                REQUIRE(dist(g, gfd) <= 1e-6 * (1.0 + norm(g)));
            }
        }
    }
}
