#include "nlrod/bvp_solver.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nlrod;

TEST_CASE("wavenumbers") {
    SUBCASE("unit case") {
        auto w = wavenumbers({1, 0}, 0);
        CHECK(w.r1 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(w.r2 == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("identities") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> ul1(0.01, 50), ul2(-2, 1.9), uk(0, 0.5);
        for (int i = 0; i < 200; ++i) {
            double l1 = ul1(rng), l2 = ul2(rng), k = uk(rng);
            double d = 1 - k * l2;
            auto w = wavenumbers({l1, l2}, k);
            CHECK(w.r1 * w.r2 == doctest::Approx(std::sqrt(l1 / d)).epsilon(1e-12));
            double T = 0.5 * (k * l1 + l2) / d;
            CHECK(w.r1 * w.r1 - w.r2 * w.r2 == doctest::Approx(2 * T).epsilon(1e-12).scale(1.0));
        }
    }
    SUBCASE("extended precision re-evaluation at the fold") {
        long double l1 = 8.29796L, l2 = 1.15665L, k = 0.45L;
        long double d = 1 - k * l2, T = (k * l1 + l2) / (2 * d), S = std::sqrt(l1 / d + T * T);
        auto w = wavenumbers({8.29796, 1.15665}, 0.45);
        CHECK(std::abs(w.r1 - static_cast<double>(std::sqrt(S + T))) < 1e-12);
        CHECK(std::abs(w.r2 - static_cast<double>(std::sqrt(S - T))) < 1e-12);
    }
    CHECK_THROWS_AS(wavenumbers({1, 5}, 0.25), DomainError);
}

TEST_CASE("characteristic function") {
    CHECK(char_f({0, 0.7}, 0.3) == 0.0);
    CHECK(char_f({0, 1.9}, 0.45) == 0.0);
    // Residual at the axis branching point relative to its local scale.
    auto g = char_gradient({29.145, 0}, 0.375325);
    double scale = std::hypot(g.d1, g.d2);
    CHECK(std::abs(char_residual({29.145, 0}, 0.375325)) < 5e-3 * scale);
    CHECK(solve_lambda2(1e-8, 0.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 4).epsilon(1e-3));
}

TEST_CASE("central-difference partials") {
    SUBCASE("agree with the complex-step gradient") {
        for (LoadPoint p : {LoadPoint{10, 0.682732}, LoadPoint{5, 1.61161}, LoadPoint{0.05, 1.2}}) {
            auto a = char_partials(p, 0.45), b = char_gradient(p, 0.45);
            CHECK(a.d1 == doctest::Approx(b.d1).epsilon(1e-6));
            CHECK(a.d2 == doctest::Approx(b.d2).epsilon(1e-6));
        }
    }
    SUBCASE("Richardson step halving") {
        LoadPoint p{7.5, 0.9};
        auto a = char_partials(p, 0.25, 1e-3), b = char_partials(p, 0.25, 5e-4), c = char_partials(p, 0.25, 2.5e-4);
        double r1 = (4 * b.d1 - a.d1) / 3, r2 = (4 * c.d1 - b.d1) / 3;
        CHECK(std::abs(r1 - r2) < 1e-6 * std::abs(r2));
    }
    SUBCASE("fold has a vanishing lambda2 partial") {
        auto f = find_fold(0.45, {8.3, 1.16});
        auto d = char_partials(f, 0.45);
        CHECK(std::abs(d.d2) < 1e-4 * std::abs(d.d1));
    }
}

TEST_CASE("slope of the critical curve") {
    auto secant = [](double l1, double k, int which) {
        double a = solve_lambda2(l1 - 0.01, k, {}, which), b = solve_lambda2(l1 + 0.01, k, {}, which);
        return (b - a) / 0.02;
    };
    double e = eta_prime({10, solve_lambda2(10, 0.25)}, 0.25);
    CHECK(e < 0);
    CHECK(e == doctest::Approx(secant(10, 0.25, 1)).epsilon(1e-3));
    double u = eta_prime({5, solve_lambda2(5, 0.45, {}, 2)}, 0.45);
    CHECK(u < 0);
    CHECK(u == doctest::Approx(secant(5, 0.45, 2)).epsilon(1e-3));
    double l = eta_prime({5, solve_lambda2(5, 0.45)}, 0.45);
    CHECK(l == doctest::Approx(secant(5, 0.45, 1)).epsilon(1e-3));
    CHECK_THROWS_AS(eta_prime(find_fold(0.45, {8.3, 1.16}), 0.45), DegeneratePoint);
}

TEST_CASE("roots in lambda2") {
    CHECK(solve_lambda2(10, 0.25) == doctest::Approx(0.682732).epsilon(1e-3 / 0.68));
    CHECK(std::abs(solve_lambda2(5, 0.45) - 1.05447) < 1e-3);
    CHECK(std::abs(solve_lambda2(5, 0.45, {}, 2) - 1.61161) < 1e-3);
    auto roots = lambda2_roots(5, 0.45);
    REQUIRE(roots.size() >= 2);
    for (double r : roots)
        CHECK(std::abs(char_residual({5, r}, 0.45)) < 1e-8);
    CHECK_THROWS_AS(solve_lambda2(20, 0.45, Interval{0, 1}), RootNotFound);
    CHECK_THROWS_AS(solve_lambda2(5, 0.45, Interval{0, 1}, 0), InvalidInput);
}

TEST_CASE("roots agree with the shooting determinant") {
    auto det_root = [](double l1, double k, double near) {
        double lo = near - 1e-4, hi = near + 1e-4;
        double flo = linear_shooting_determinant({l1, lo}, k), fhi = linear_shooting_determinant({l1, hi}, k);
        REQUIRE(flo * fhi < 0);
        for (int i = 0; i < 60; ++i) {
            double mid = 0.5 * (lo + hi), fm = linear_shooting_determinant({l1, mid}, k);
            (fm * flo > 0 ? lo : hi) = mid;
            if (fm * flo > 0)
                flo = fm;
        }
        return 0.5 * (lo + hi);
    };
    double r = solve_lambda2(5, 0.0);
    CHECK(std::abs(r - det_root(5, 0.0, r)) < 1e-6);
    double l = solve_lambda1(0, 0.0);
    double lo = linear_shooting_determinant({l - 1e-4, 0}, 0.0), hi = linear_shooting_determinant({l + 1e-4, 0}, 0.0);
    CHECK(lo * hi < 0);
    // Zero of the determinant in lambda1 by bisection.
    double a = l - 1e-4, b = l + 1e-4;
    for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (a + b), fm = linear_shooting_determinant({m, 0}, 0.0);
        (fm * lo > 0 ? a : b) = m;
        if (fm * lo > 0)
            lo = fm;
    }
    CHECK(std::abs(l - 0.5 * (a + b)) < 1e-6);
}

TEST_CASE("roots in lambda1") {
    CHECK(std::abs(solve_lambda1(0, 0.25) - 16.71310) < 1e-3);
    auto k = find_kappa_cr();
    // Just below kappa_cr the two axis crossings straddle the branching point.
    CHECK(std::abs(solve_lambda1(0, k.kappa - 1e-9, Interval{29.0, 29.3}) - 29.145) < 5e-3);
    CHECK_THROWS_AS(solve_lambda1(0, 0.375325, Interval{25, 35}), RootNotFound);
}

TEST_CASE("every returned point lies on the curve") {
    for (double l1 : {0.05, 2.5, 7.5, 15.0})
        CHECK(std::abs(char_residual({l1, solve_lambda2(l1, 0.25)}, 0.25)) < 1e-8);
    CHECK(std::abs(char_residual(find_fold(0.45), 0.45)) < 1e-8);
    CHECK(std::abs(char_residual(find_branch_minimum(0.45), 0.45)) < 1e-8);
    auto k = find_kappa_cr();
    CHECK(std::abs(char_residual({k.lambda1, 0}, k.kappa)) < 1e-8);
}

namespace {
std::vector<double> grid(double a, double b, double h) {
    std::vector<double> g;
    for (int i = 0; a + i * h <= b + 1e-12; ++i)
        g.push_back(a + i * h);
    return g;
}
}  // namespace

TEST_CASE("tracing at kappa 0.25") {
    auto curves = trace_curve(0.25, grid(0.05, 16.7, 0.05), 1);
    REQUIRE(curves.size() == 1);
    const auto& c = curves[0];
    CHECK(c.branch_tag == BranchTag::single);
    CHECK_FALSE(c.fold.has_value());
    for (std::size_t i = 1; i < c.points.size(); ++i)
        CHECK(c.points[i].p.lambda2 < c.points[i - 1].p.lambda2);
    // slope against secant of the traced points away from folds
    for (std::size_t i = 10; i + 10 < c.points.size(); i += 50) {
        double sec = (c.points[i + 1].p.lambda2 - c.points[i - 1].p.lambda2) /
                     (c.points[i + 1].p.lambda1 - c.points[i - 1].p.lambda1);
        CHECK(c.points[i].eta_prime == doctest::Approx(sec).epsilon(1e-3));
    }
}

TEST_CASE("tracing at kappa 0.45 produces a folded pair") {
    auto curves = trace_curve(0.45, grid(0.05, 10, 0.05), 1);
    REQUIRE(curves.size() == 2);
    CHECK(curves[0].branch_tag == BranchTag::lower);
    CHECK(curves[1].branch_tag == BranchTag::upper);
    REQUIRE(curves[0].fold.has_value());
    CHECK(curves[0].fold->lambda1 == doctest::Approx(8.298).epsilon(1e-3));
    CHECK(curves[0].points.back().p.lambda1 < 8.3);
}

TEST_CASE("coarse lambda1 steps keep the same sheets") {
    auto single = trace_curve(0.25, {0.05, 5.0, 9.95}, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].points.size() == 3);
    CHECK(single[0].points[1].p.lambda2 == doctest::Approx(1.13541).epsilon(1e-5));

    // every root pair dies between the last two columns
    auto folded = trace_curve(0.45, grid(0.05, 12, 1.5), 1);
    REQUIRE(folded.size() == 2);
    CHECK(folded[0].points.size() == 6);
    CHECK(folded[1].points.size() == 6);
    CHECK(folded[1].points.front().p.lambda2 == doctest::Approx(2.01637).epsilon(1e-5));
}

TEST_CASE("higher modes branch below kappa_cr") {
    auto curves = trace_curve(0.25, grid(0.05, 60, 0.25), 3);
    bool folded = false;
    for (const auto& c : curves)
        folded = folded || c.fold.has_value();
    CHECK(folded);
}

TEST_CASE("empty range traces nothing") {
    CHECK(trace_curve(0.25, {}, 1).empty());
    TraceOptions opt;
    opt.lambda2_hi = 0.1;
    CHECK(trace_curve(0.25, grid(0.05, 5, 0.05), 1, opt).empty());
}

TEST_CASE("fold and branch minimum at kappa 0.45") {
    auto f = find_fold(0.45, {8.3, 1.16});
    CHECK(std::abs(f.lambda1 - 8.29796) < 1e-3);
    CHECK(std::abs(f.lambda2 - 1.15665) < 1e-3);
    auto m = find_branch_minimum(0.45, {6.3, 1.05});
    CHECK(std::abs(m.lambda1 - 6.32271) < 1e-3);
    CHECK(std::abs(m.lambda2 - 1.04474) < 1e-3);
    CHECK(std::abs(eta_prime(m, 0.45)) < 1e-4);
}

TEST_CASE("monotone curve below kappa_cr has neither fold nor minimum") {
    CHECK_THROWS_AS(find_fold(0.25, {10, 0.7}), NoFold);
    CHECK_THROWS_AS(find_fold(0.25), NoFold);
    CHECK_THROWS_AS(find_branch_minimum(0.25, {10, 0.7}), NotFound);
}

TEST_CASE("critical non-locality") {
    auto k = find_kappa_cr();
    CHECK(std::abs(k.kappa - 0.375325) < 5e-4);
    CHECK(std::abs(k.lambda1 - 29.145) < 5e-3);
    CHECK_THROWS_AS(find_fold(k.kappa - 0.01), NoFold);
    auto f = find_fold(k.kappa + 0.01);
    CHECK(f.lambda2 > 0);
    // Just above kappa_cr the fold sits close to the axis, but not on it.
    auto near = find_fold(0.375325);
    CHECK(near.lambda2 > 0);
    CHECK(near.lambda2 < 0.05);
}

TEST_CASE("fold height against kappa") {
    auto k = find_kappa_cr();
    std::vector<double> ks, l2;
    for (int i = 0; i < 5; ++i)
        ks.push_back(k.kappa + 0.01 + i * (0.5 - k.kappa - 0.01) / 4);
    for (double kk : ks)
        l2.push_back(find_fold(kk).lambda2);
    for (std::size_t i = 1; i < l2.size(); ++i) {
        CHECK(l2[i] > l2[i - 1]);
        CHECK(l2[i] - l2[i - 1] < 0.5);
    }
    // Past kappa = 0.5 the fold height decreases again.
    CHECK(find_fold(0.6).lambda2 < find_fold(0.5).lambda2);
}
