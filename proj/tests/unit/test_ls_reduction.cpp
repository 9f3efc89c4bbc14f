#include "nlrod/bvp_solver.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"
#include "nlrod/ls_reduction.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>

using namespace nlrod;

namespace {
LoadPoint on_curve(double l1, double kappa, int which = 1) { return {l1, solve_lambda2(l1, kappa, {}, which)}; }

ReductionCoefficients reduce(const LoadPoint& p, double k, int order = 2) {
    return reduction_coefficients(p, k, mode_shape(p, k), adjoint_kernel(order, p, k));
}

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-13);
}

// Closed-form antiderivatives of a trig-hyperbolic combination.
double anti1(const TrigHyp& y, double t) {
    return y.C * (y.a1 * std::sin(y.r1 * t) / y.r1 + y.a2 * std::sinh(y.r2 * t) / y.r2 -
                  y.b1 * std::cos(y.r1 * t) / y.r1 + y.b2 * std::cosh(y.r2 * t) / y.r2);
}
double anti2(const TrigHyp& y, double t) {
    double s1 = y.r1 * y.r1, s2 = y.r2 * y.r2;
    return y.C * (-y.a1 * std::cos(y.r1 * t) / s1 + y.a2 * std::cosh(y.r2 * t) / s2 -
                  y.b1 * std::sin(y.r1 * t) / s1 + y.b2 * std::sinh(y.r2 * t) / s2);
}
}  // namespace

TEST_CASE("published verdicts") {
    CHECK(reduce(on_curve(10, 0.25), 0.25).verdict == Verdict::Supercritical);
    CHECK(reduce(on_curve(0.05, 0.45, 2), 0.45).verdict == Verdict::Subcritical);
    CHECK(reduce(on_curve(2.5, 0.45, 2), 0.45).verdict == Verdict::Subcritical);
    for (double l1 : {0.05, 2.5, 5.0, 6.0, 7.0, 7.5, 8.0})
        CHECK(reduce(on_curve(l1, 0.45), 0.45).verdict == Verdict::Supercritical);
}

TEST_CASE("both kernels give the same verdict") {
    for (auto [l1, k, which] : {std::tuple{10.0, 0.25, 1}, std::tuple{0.05, 0.45, 2}, std::tuple{5.0, 0.45, 1},
                                std::tuple{7.5, 0.45, 2}, std::tuple{3.0, 0.0, 1}}) {
        auto p = on_curve(l1, k, which);
        CHECK(reduce(p, k, 2).verdict == reduce(p, k, 4).verdict);
    }
}

TEST_CASE("classification table") {
    CHECK(classify_pitchfork(1, -1) == Verdict::Supercritical);
    CHECK(classify_pitchfork(-1, 1) == Verdict::Supercritical);
    CHECK(classify_pitchfork(1, 1) == Verdict::Subcritical);
    CHECK(classify_pitchfork(-1, -1) == Verdict::Subcritical);
    CHECK(classify_pitchfork(0, 1) == Verdict::Degenerate);
    CHECK(classify_pitchfork(1, 0) == Verdict::Degenerate);
    CHECK(to_string(Verdict::Subcritical) == "Subcritical");
}

TEST_CASE("fold points are rejected") {
    auto f = find_fold(0.45);
    CHECK_THROWS_AS(reduce(f, 0.45), DegeneratePoint);
}

TEST_CASE("local rod collapse") {
    auto p = on_curve(3, 0.0);
    auto y = mode_shape(p, 0.0);
    auto q = adjoint_kernel(2, p, 0.0);
    auto rc = reduction_coefficients(p, 0.0, y, q);

    auto i1y = [&](double t) { return anti1(y, 1.0) - anti1(y, t); };
    auto i2y = [&](double t) { return anti1(y, 1.0) * (1 - t) - (anti2(y, 1.0) - anti2(y, t)); };
    auto i1yd = [&](double t) { return y.eval(1.0) - y.eval(t); };
    auto yd = [&](double t) { return y.eval(t, 1); };
    auto i3y = [&](double t) { return quad([&](double s) { return yd(s) * yd(s) * i1y(s); }, t, 1.0); };
    auto pair = [&](const std::function<double(double)>& F) { return quad([&](double t) { return F(t) * q.eval(t); }, 0, 1); };

    double c11 = -pair(i2y);
    double c12 = -pair(i1yd);
    double c3 = 0.5 * pair([&](double t) {
        double s = yd(t) * yd(t);
        return p.lambda1 * (i3y(t) + s * i2y(t)) + p.lambda2 * s * i1yd(t);
    });
    CHECK(std::abs(rc.c11 - c11) < 1e-8);
    CHECK(std::abs(rc.c12 - c12) < 1e-8);
    CHECK(rc.c13 == 0.0);
    CHECK(std::abs(rc.c3 - c3) < 1e-8);
}

TEST_CASE("c13 shares its integral with c12") {
    const double k = 0.45;
    auto p = on_curve(5, k);
    auto y = mode_shape(p, k);
    auto q = adjoint_kernel(2, p, k);
    auto rc = reduction_coefficients(p, k, y, q);
    double d = 1 - k * p.lambda2;
    double first = -inner_product(I1(y.sample(1)), q.sample()) / d;
    double second = rc.c12 - first;
    CHECK(rc.c13 == doctest::Approx(-k / d * second).epsilon(1e-12));
}

TEST_CASE("gauge and scale") {
    const double k = 0.45;
    auto p = on_curve(2.5, k);
    auto y = mode_shape(p, k);
    auto q = adjoint_kernel(2, p, k);
    auto base = reduction_coefficients(p, k, y, q);
    AdjointKernel f = q;
    f.C = -f.C;
    auto flipped = reduction_coefficients(p, k, y, f);
    CHECK(flipped.c11 == doctest::Approx(-base.c11).epsilon(1e-14));
    CHECK(flipped.c12 == doctest::Approx(-base.c12).epsilon(1e-14));
    CHECK(flipped.c13 == doctest::Approx(-base.c13).epsilon(1e-14));
    CHECK(flipped.c3 == doctest::Approx(-base.c3).epsilon(1e-14));
    CHECK(flipped.verdict == base.verdict);
    TrigHyp s = y;
    s.C *= 2.5;
    auto scaled = reduction_coefficients(p, k, s, q);
    CHECK(scaled.c11 == doctest::Approx(2.5 * base.c11).epsilon(1e-12));
    CHECK(scaled.c12 == doctest::Approx(2.5 * base.c12).epsilon(1e-12));
    CHECK(scaled.c3 == doctest::Approx(2.5 * 2.5 * 2.5 * base.c3).epsilon(1e-12));
    CHECK(scaled.verdict == base.verdict);
}

TEST_CASE("grid doubling") {
    const double k = 0.25;
    auto p = on_curve(10, k);
    auto a = reduction_coefficients(p, k, mode_shape(p, k), adjoint_kernel(2, p, k));
    auto b = reduction_coefficients(p, k, mode_shape(p, k, 8192), adjoint_kernel(2, p, k, 8192), 8192);
    CHECK(b.c11 == doctest::Approx(a.c11).epsilon(1e-6));
    CHECK(b.c12 == doctest::Approx(a.c12).epsilon(1e-6));
    CHECK(b.c13 == doctest::Approx(a.c13).epsilon(1e-6));
    CHECK(b.c3 == doctest::Approx(a.c3).epsilon(1e-6));
}

TEST_CASE("tangential coefficient vanishes along the curve") {
    auto rc = reduce(on_curve(10, 0.25), 0.25);
    CHECK(std::abs(rc.tangent_linear) < 1e-8 * std::hypot(rc.c11, rc.c12));
    CHECK(std::abs(rc.transverse_linear) > 1e-4);
}

TEST_CASE("amplitude prediction") {
    const double k = 0.25;
    auto p = on_curve(10, k);
    auto y = mode_shape(p, k);
    auto rc = reduction_coefficients(p, k, y, adjoint_kernel(2, p, k));
    REQUIRE(bifurcation_amplitude(rc, 0.0).has_value());
    CHECK(*bifurcation_amplitude(rc, 0.0) == 0.0);
    // exactly one side of the critical point carries small solutions
    bool plus = bifurcation_amplitude(rc, 0.1).has_value(), minus = bifurcation_amplitude(rc, -0.1).has_value();
    CHECK(plus != minus);
    double sgn = plus ? 1.0 : -1.0;
    for (double dl : {0.05, 0.1, 0.2, 0.5}) {
        double a = *bifurcation_amplitude(rc, sgn * dl);
        CHECK(a > 0);
        auto sol = solve_postbuckling(p, k, sgn * dl, Direction::fixed_lambda2, +1);
        double ratio = std::abs(tip_deflection(sol)) / (a * std::abs(y.eval(1.0)));
        CHECK(ratio > 0.5);
        CHECK(ratio < 2.0);
    }
}
