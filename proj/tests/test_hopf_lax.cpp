#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "shockflow/hopf_lax.hpp"
#include "shockflow/rng.hpp"
#include "test_util.hpp"

using namespace shockflow;

namespace {

std::shared_ptr<HamiltonianModel> burgers1d() {
    return std::make_shared<HamiltonianModel>(HamiltonianModel::quadratic_identity(1));
}

InitialData neg_abs() {
    return InitialData::callback(1, [](const Vec& y) { return -std::abs(y[0]); });
}

std::vector<InitialData::AffinePiece> tetra_pieces() {
    return {{Vec{1.0, 0.0, 1.0}, 0.0},
            {Vec{1.0, 0.0, -1.0}, 0.0},
            {Vec{-1.0, 1.0, 0.0}, 0.0},
            {Vec{-1.0, -1.0, 0.0}, 0.0}};
}

/// dense 1-d scan oracle for min_y [phi0(y) + (x-y)^2/(2t)]
double scan_oracle_1d(const std::function<double(double)>& phi0, double t, double x,
                      double window, std::vector<double>* argmins = nullptr) {
    const int n = 200001;
    const double dx = 2.0 * window / (n - 1);
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        const double y = x - window + i * dx;
        best = std::min(best, phi0(y) + (x - y) * (x - y) / (2.0 * t));
    }
    if (argmins) {
        argmins->clear();
        for (int i = 0; i < n; ++i) {
            const double y = x - window + i * dx;
            const double f = phi0(y) + (x - y) * (x - y) / (2.0 * t);
            if (f <= best + 1e-9) {
                if (argmins->empty() || y - argmins->back() > 10 * dx) argmins->push_back(y);
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("hopf_lax_value") {
    auto model = burgers1d();

    SECTION("Burgers with phi0 = -|y| at (1,0): two minimizers at +-1") {
        std::vector<double> oracle_mins;
        const double oracle =
            scan_oracle_1d([](double y) { return -std::abs(y); }, 1.0, 0.0, 3.0, &oracle_mins);
        CHECK(oracle == Catch::Approx(-0.5).margin(1e-8));
        REQUIRE(oracle_mins.size() == 2);

        const auto vr = hopf_lax_value(*model, neg_abs(), 1.0, Vec{0.0});
        CHECK(vr.value == Catch::Approx(-0.5).margin(1e-8));
        REQUIRE(vr.minimizer_points.size() == 2);
        std::vector<double> ys{vr.minimizer_points[0][0], vr.minimizer_points[1][0]};
        std::sort(ys.begin(), ys.end());
        CHECK(ys[0] == Catch::Approx(-1.0).margin(1e-6));
        CHECK(ys[1] == Catch::Approx(1.0).margin(1e-6));
        std::vector<double> ps{vr.momenta[0][0], vr.momenta[1][0]};
        std::sort(ps.begin(), ps.end());
        CHECK(ps[0] == Catch::Approx(-1.0).margin(1e-6));
        CHECK(ps[1] == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("Burgers with phi0 = y^2/2: closed form x^2/(2(1+t))") {
        InitialData parab = InitialData::callback(1, [](const Vec& y) { return 0.5 * y[0] * y[0]; });
        Rng rng(11);
        for (int k = 0; k < 20; ++k) {
            const double t = rng.uniform(0.2, 2.0);
            const double x = rng.uniform(-1.5, 1.5);
            const auto vr = hopf_lax_value(*model, parab, t, Vec{x});
            CHECK(vr.value == Catch::Approx(x * x / (2.0 * (1.0 + t))).margin(1e-8));
            REQUIRE(vr.minimizer_points.size() == 1);
            CHECK(vr.minimizer_points[0][0] == Catch::Approx(x / (1.0 + t)).margin(1e-6));
        }
    }

    SECTION("t -> 0+ recovers the initial condition") {
        InitialData parab = InitialData::callback(1, [](const Vec& y) { return 0.5 * y[0] * y[0]; });
        const double x = 0.7;
        for (double t : {0.1, 0.01, 0.001})
            CHECK(hopf_lax_value(*model, parab, t, Vec{x}).value ==
                  Catch::Approx(0.5 * x * x).margin(3.0 * t));
    }

    SECTION("tetrahedron min-affine data: all four branches tie at x=0") {
        auto m3 = std::make_shared<HamiltonianModel>(HamiltonianModel::quadratic_identity(3));
        InitialData phi0 = InitialData::min_affine(tetra_pieces());
        for (double t : {0.05, 0.2}) {
            const auto vr = hopf_lax_value(*m3, phi0, t, Vec::zero(3));
            CHECK(vr.value == Catch::Approx(-t).margin(1e-12));
            REQUIRE(vr.momenta.size() == 4);
        }
    }

    SECTION("window too small raises") {
        InitialData parab = InitialData::callback(1, [](const Vec& y) { return 0.5 * y[0] * y[0]; });
        SearchSpec spec;
        spec.window_halfwidth = 0.3;  // true minimizer sits at distance 1 from x
        CHECK_THROWS_AS(hopf_lax_value(*model, parab, 1.0, Vec{2.0}, spec), WindowTooSmall);
    }
}

TEST_CASE("classify_point") {
    auto model = burgers1d();
    SECTION("shock for the corner data") {
        const auto vr = hopf_lax_value(*model, neg_abs(), 1.0, Vec{0.0});
        const auto c = classify_point(vr);
        CHECK(c.cls == PointClass::shock);
        CHECK(c.branch_count == 2);
    }
    SECTION("regular for strictly convex total objective") {
        InitialData parab = InitialData::callback(1, [](const Vec& y) { return 0.5 * y[0] * y[0]; });
        const auto vr = hopf_lax_value(*model, parab, 1.0, Vec{0.4});
        CHECK(classify_point(vr).cls == PointClass::regular);
    }
    SECTION("preshock at the focusing time of phi0 = -y^2/2") {
        InitialData conc =
            InitialData::callback(1, [](const Vec& y) { return -0.5 * y[0] * y[0]; });
        SearchSpec spec;
        spec.window_halfwidth = 1.0;  // objective is identically zero at t = 1
        const auto vr = hopf_lax_value(*model, conc, 1.0, Vec{0.0}, spec);
        CHECK(classify_point(vr).cls == PointClass::preshock);
        CHECK(vr.value == Catch::Approx(0.0).margin(1e-9));
        // before focusing the same data is regular
        const auto vr2 = hopf_lax_value(*model, conc, 0.5, Vec{0.0}, spec);
        CHECK(classify_point(vr2).cls == PointClass::regular);
    }
}

TEST_CASE("branchset_at") {
    auto model = burgers1d();
    SECTION("two branches with H = 1/2 at the stationary shock") {
        const auto b = branchset_at(model, neg_abs(), 1.0, Vec{0.0});
        REQUIRE(b.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(std::abs(std::abs(b[i].p[0]) - 1.0) < 1e-6);
            CHECK(b[i].H == Catch::Approx(0.5).margin(1e-6));
        }
    }
    SECTION("regular point gives the single smooth branch") {
        InitialData parab = InitialData::callback(1, [](const Vec& y) { return 0.5 * y[0] * y[0]; });
        const auto b = branchset_at(model, parab, 1.0, Vec{1.0});
        REQUIRE(b.size() == 1);
        // phi(t,x) = x^2/(2(1+t)) so grad phi = x/(1+t)
        CHECK(b[0].p[0] == Catch::Approx(0.5).margin(1e-6));
    }
    SECTION("tetrahedron solution reproduces the four momenta") {
        auto m3 = std::make_shared<HamiltonianModel>(HamiltonianModel::quadratic_identity(3));
        const auto b = branchset_at(m3, InitialData::min_affine(tetra_pieces()), 0.1, Vec::zero(3));
        REQUIRE(b.size() == 4);
        for (const auto& piece : tetra_pieces()) {
            bool found = false;
            for (std::size_t i = 0; i < b.size(); ++i)
                if (dist(b[i].p, piece.p) < 1e-9) found = true;
            CHECK(found);
        }
    }
    SECTION("preshock raises") {
        InitialData conc =
            InitialData::callback(1, [](const Vec& y) { return -0.5 * y[0] * y[0]; });
        SearchSpec spec;
        spec.window_halfwidth = 1.0;
        CHECK_THROWS_AS(branchset_at(model, conc, 1.0, Vec{0.0}, spec), PreshockError);
    }
}

TEST_CASE("dynamic programming consistency on regular points") {
    auto model = burgers1d();
    InitialData parab = InitialData::callback(1, [](const Vec& y) { return 0.5 * y[0] * y[0]; });
    const double s = 0.4, t = 1.1;
    for (double x : {-0.8, 0.0, 0.6}) {
        const double direct = hopf_lax_value(*model, parab, t, Vec{x}).value;
        double relay = 1e300;
        for (int i = 0; i <= 4000; ++i) {
            const double z = x - 2.0 + i * 1e-3;
            const double leg1 = hopf_lax_value(*model, parab, s, Vec{z}).value;
            const double v = (x - z) / (t - s);
            relay = std::min(relay, leg1 + (t - s) * 0.5 * v * v);
        }
        CHECK(direct == Catch::Approx(relay).margin(2e-6));
    }
}

TEST_CASE("monotone loss of minimizers along a merging-shock curve") {
    auto model = burgers1d();
    // three affine pieces: shocks at x = t/2 and x = 1/4 - t/2 merge at t = 1/4
    InitialData phi0 = InitialData::min_affine(
        {{Vec{1.0}, 0.0}, {Vec{0.0}, 0.0}, {Vec{-1.0}, 0.25}});
    auto shock_x = [](double t) { return t < 0.25 ? 0.5 * t : 0.125; };
    bool middle_gone = false;
    for (int k = 0; k <= 40; ++k) {
        const double t = 0.05 + k * (0.6 - 0.05) / 40.0;
        const auto vr = hopf_lax_value(*model, phi0, t, Vec{shock_x(t)});
        bool has_middle = false;
        for (const auto& p : vr.momenta)
            if (std::abs(p[0]) < 1e-6) has_middle = true;
        if (middle_gone) REQUIRE_FALSE(has_middle);  // branches never rejoin
        if (!has_middle) middle_gone = true;
        REQUIRE(vr.minimizer_points.size() >= 2);
        REQUIRE(vr.minimizer_points.size() <= 3);
    }
    CHECK(middle_gone);
}

TEST_CASE("Lipschitz bound propagates") {
    auto model = burgers1d();
    InitialData phi0 = neg_abs();
    Rng rng(3);
    for (int k = 0; k < 40; ++k) {
        const double t = rng.uniform(0.3, 1.5);
        const double x1 = rng.uniform(-1.0, 1.0), x2 = rng.uniform(-1.0, 1.0);
        const double f1 = hopf_lax_value(*model, phi0, t, Vec{x1}).value;
        const double f2 = hopf_lax_value(*model, phi0, t, Vec{x2}).value;
        REQUIRE(std::abs(f1 - f2) <= 1.0 * std::abs(x1 - x2) + 1e-7);
    }
}

TEST_CASE("grid-sampled initial data approximates the closed form") {
    auto model = burgers1d();
    std::vector<double> vals;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        const double y = -4.0 + 8.0 * i / (n - 1);
        vals.push_back(-std::abs(y));
    }
    InitialData gridded = InitialData::grid1d(-4.0, 4.0, vals);
    const auto vr = hopf_lax_value(*model, gridded, 1.0, Vec{0.0});
    CHECK(vr.value == Catch::Approx(-0.5).margin(1e-4));
    CHECK(vr.minimizer_points.size() == 2);
}
