#include "nlrod/bvp_solver.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nlrod;

namespace {
LoadPoint on_curve(double l1, double kappa, int which = 1) { return {l1, solve_lambda2(l1, kappa, {}, which)}; }

RodSetup perfect(double kappa) {
    RodSetup s;
    s.kappa = kappa;
    return s;
}
}  // namespace

TEST_CASE("right-hand side") {
    auto d = reduce_rhs({0.4, 0, 0, 0, 0}, {3, 0.5}, perfect(0.25), 0.4);
    CHECK(d.x == 1.0);
    CHECK(d.y == 0.0);
    CHECK(d.theta == 0.0);
    CHECK(d.v == 0.0);
    CHECK(d.m == 0.0);
    RodSetup local;
    local.alpha1 = 0.1;
    local.rho0 = fixture_curvature;
    RodState s{0.2, 0.05, 0.1, 0.3, 0.7};
    CHECK(reduce_rhs(s, {3, 0.5}, local, 0.3).theta == doctest::Approx(0.7 + 0.1 * fixture_curvature(0.3)));
    // 1 - kappa*lambda2*cos(theta) = 0
    CHECK_THROWS_AS(reduce_rhs({0, 0, 0, 0, 0}, {1, 4}, perfect(0.25), 0.0), IntegrationError);
}

TEST_CASE("straight rod integrates to the straight rod") {
    auto tr = integrate({5, 0.5}, perfect(0.25), 0, 0, 512);
    for (const auto& s : tr)
        CHECK(s.y == 0.0);
    CHECK(tr.back().x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(integrate({5, 0.5}, perfect(0.25), 0, 0, 511), InvalidInput);
}

TEST_CASE("regime violation reports its location") {
    try {
        integrate({1, 0}, perfect(0), 0, 5.0, 512);
        FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
        CHECK(e.t > 0.0);
        CHECK(e.t <= 1.0);
    }
}

TEST_CASE("trajectory identities") {
    auto sol = solve_postbuckling(on_curve(10, 0.25), 0.25, 0.5, Direction::along_lambda1, +1);
    const auto& tr = sol.trajectory;
    const std::size_t n = tr.size() - 1;
    SampledFn y(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
        y[i] = tr[i].y;
    auto i1y = I1(y);
    double worst_v = 0, worst_m = 0;
    const double h = 1.0 / n, k = sol.setup.kappa, l1 = sol.load.lambda1, l2 = sol.load.lambda2;
    for (std::size_t i = 0; i <= n; ++i) {
        worst_v = std::max(worst_v, std::abs(tr[i].v - (sol.setup.alpha2 + l1 * i1y[i])));
        if (i >= 2 && i + 2 <= n) {
            // moment recovered from the constitutive law with a differenced curvature
            double th = (tr[i - 2].theta - 8 * tr[i - 1].theta + 8 * tr[i + 1].theta - tr[i + 2].theta) / (12 * h);
            double c = std::cos(tr[i].theta), s = std::sin(tr[i].theta);
            double m = th * (1 + k * (tr[i].v * s - l2 * c)) + k * l1 * tr[i].y * c;
            worst_m = std::max(worst_m, std::abs(m - tr[i].m));
        }
    }
    CHECK(worst_v < 1e-8);
    CHECK(worst_m < 1e-6);
    for (const auto& st : tr)
        CHECK(std::abs(std::hypot(std::cos(st.theta), std::sin(st.theta)) - 1.0) < 1e-15);
}

TEST_CASE("step halving") {
    auto sol = solve_postbuckling(on_curve(10, 0.25), 0.25, 0.5, Direction::along_lambda1, +1);
    auto a = integrate(sol.load, sol.setup, sol.v0, sol.m0, 4096);
    auto b = integrate(sol.load, sol.setup, sol.v0, sol.m0, 8192);
    CHECK(std::abs(a.back().y - b.back().y) < 1e-8);
}

TEST_CASE("trivial shooting") {
    auto sol = shoot({5, 0.5}, perfect(0.25), 0, 0);
    CHECK(tip_deflection(sol) == 0.0);
    CHECK(node_count(sol) == 0);
    CHECK(residual_M2(sol) < 1e-10);
}

TEST_CASE("post-buckled shape near a kappa 0.25 critical point") {
    auto p0 = on_curve(10, 0.25);
    auto sol = solve_postbuckling(p0, 0.25, 0.5, Direction::along_lambda1, +1);
    CHECK(sol.load.lambda1 == doctest::Approx(10.5));
    CHECK(sol.load.lambda2 == doctest::Approx(p0.lambda2 + eta_prime(p0, 0.25) * 0.5));
    CHECK(tip_deflection(sol) > 1e-3);
    CHECK(node_count(sol) == 0);
    CHECK(residual_M2(sol) < 1e-4);
    CHECK(std::abs(sol.terminal[0]) < 1e-9);
    CHECK(std::abs(sol.terminal[1]) < 1e-9);
    // y rises monotonically along the rod
    for (std::size_t i = 1; i < sol.trajectory.size(); ++i)
        CHECK(sol.trajectory[i].y >= sol.trajectory[i - 1].y);
}

TEST_CASE("first post-buckling point of the kappa 0.25 family") {
    auto sol = solve_postbuckling(on_curve(0.05, 0.25), 0.25, 0.5, Direction::along_lambda1, +1);
    CHECK(node_count(sol) == 0);
    CHECK(residual_M2(sol) < 1e-4);
}

TEST_CASE("shape change across the branch minimum") {
    auto below = solve_postbuckling(on_curve(5, 0.45), 0.45, 0.02, Direction::fixed_lambda1, +1);
    auto above = solve_postbuckling(on_curve(7.5, 0.45), 0.45, 0.02, Direction::fixed_lambda1, +1);
    CHECK(node_count(below) == 0);
    CHECK(node_count(above) == 1);
    CHECK(residual_M2(below) < 1e-4);
    CHECK(residual_M2(above) < 1e-4);
}

TEST_CASE("small solutions live on one side only") {
    for (auto [l1, which] : {std::pair{2.5, 2}, std::pair{5.0, 1}}) {
        int found = 0;
        for (double d : {0.02, -0.02}) {
            try {
                solve_postbuckling(on_curve(l1, 0.45, which), 0.45, d, Direction::fixed_lambda1, +1);
                ++found;
            } catch (const NotFound&) {
            }
        }
        CHECK(found == 1);
    }
    CHECK_THROWS_AS(solve_postbuckling(on_curve(10, 0.25), 0.25, 0.5, Direction::along_lambda1, 0), InvalidInput);
}

TEST_CASE("mirror solution") {
    auto p0 = on_curve(10, 0.25);
    auto a = solve_postbuckling(p0, 0.25, 0.3, Direction::fixed_lambda2, +1);
    auto b = solve_postbuckling(p0, 0.25, 0.3, Direction::fixed_lambda2, -1);
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        CHECK(std::abs(a.trajectory[i].y + b.trajectory[i].y) < 1e-8);
        CHECK(std::abs(a.trajectory[i].theta + b.trajectory[i].theta) < 1e-8);
        CHECK(std::abs(a.trajectory[i].v + b.trajectory[i].v) < 1e-8);
        CHECK(std::abs(a.trajectory[i].m + b.trajectory[i].m) < 1e-8);
    }
}

TEST_CASE("pitchfork amplitude law") {
    auto p0 = on_curve(10, 0.25);
    std::vector<double> r;
    for (double d : {0.1, 0.2, 0.3, 0.4, 0.5})
        r.push_back(tip_deflection(solve_postbuckling(p0, 0.25, d, Direction::fixed_lambda2, +1)) / std::sqrt(d));
    auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    CHECK(*hi / *lo < 1.15);
}

TEST_CASE("imperfect rod follows its linear response") {
    auto make = [](double alpha) {
        RodSetup s;
        s.kappa = 0.25;
        s.alpha1 = s.alpha2 = alpha;
        s.rho0 = fixture_curvature;
        return s;
    };
    LoadPoint p{5, 0.5};
    auto big = shoot(p, make(0.01), 0.0, 0.0);
    auto tiny = shoot(p, make(1e-7), 0.0, 0.0);
    double linear = tiny.trajectory.back().y * (0.01 / 1e-7);
    CHECK(std::abs(big.trajectory.back().y) > 1e-4);
    CHECK(std::abs(big.trajectory.back().y) < 0.1);
    CHECK(big.trajectory.back().y == doctest::Approx(linear).epsilon(0.1));
    CHECK(residual_M2(big) < 1e-4);
}

TEST_CASE("M2 residual is sensitive") {
    auto sol = solve_postbuckling(on_curve(10, 0.25), 0.25, 0.5, Direction::along_lambda1, +1);
    auto y = deflection(sol);
    double base = residual_M2(y, sol.load, sol.setup);
    auto bumped = y + SampledFn::sample([](double t) { return 1e-3 * std::sin(std::numbers::pi * t); }, y.intervals());
    CHECK(residual_M2(bumped, sol.load, sol.setup) - base >= 1e-4);
}

TEST_CASE("linear shooting determinant") {
    double a = linear_shooting_determinant({10, 0.682732 - 1e-3}, 0.25);
    double b = linear_shooting_determinant({10, 0.682732 + 1e-3}, 0.25);
    CHECK(a * b < 0);
    const double e = std::numbers::pi * std::numbers::pi / 4;
    CHECK(linear_shooting_determinant({1e-8, e - 1e-3}, 0.0) * linear_shooting_determinant({1e-8, e + 1e-3}, 0.0) < 0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u1(0.5, 20), u2(0, 0.5);
    for (int i = 0; i < 5; ++i) {
        LoadPoint p{u1(rng), u2(rng)};
        CHECK(std::abs(linear_shooting_determinant(p, 0.2)) > 1e-12);
    }
}

TEST_CASE("direction names") {
    for (auto d : {Direction::along_lambda1, Direction::along_lambda2, Direction::fixed_lambda2,
                   Direction::fixed_lambda1})
        CHECK(direction_from_string(to_string(d)) == d);
    CHECK_THROWS_AS(direction_from_string("sideways"), InvalidInput);
}
