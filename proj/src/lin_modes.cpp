#include "nlrod/lin_modes.hpp"

#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"

#include <cmath>

namespace nlrod {

namespace {

// k-th derivative of cos(x), sin(x) with respect to x, exact cycles.
double dcos(int k, double c, double s) {
    switch (k % 4) {
        case 0: return c;
        case 1: return -s;
        case 2: return -c;
        default: return s;
    }
}
double dsin(int k, double c, double s) {
    switch (k % 4) {
        case 0: return s;
        case 1: return c;
        case 2: return -s;
        default: return -c;
    }
}

struct Coeffs {
    double A, B, d;  // y'''' + A y'' - B y = 0, d = 1 - kappa*lambda2
};

Coeffs operator_coeffs(const LoadPoint& p, double kappa) {
    double d = 1.0 - kappa * p.lambda2;
    if (!(d > 0.0))
        throw DomainError("1 - kappa*lambda2 <= 0: singular denominator");
    return {(kappa * p.lambda1 + p.lambda2) / d, p.lambda1 / d, d};
}

void require_critical(const LoadPoint& p0, double kappa) {
    if (!(p0.lambda1 > 0.0))
        throw DomainError("closed-form modes need lambda1 > 0");
    double g = char_residual(p0, kappa);
    if (!(std::abs(g) < 1e-8))
        throw DomainError("load point is not critical (characteristic residual " + std::to_string(g) + ")");
}

double raw_norm(const TrigHyp& f, std::size_t grid) {
    TrigHyp u = f;
    u.C = 1.0;
    auto s = u.sample(0, grid);
    return std::sqrt(inner_product(s, s));
}

}  // namespace

double TrigHyp::eval(double t, int order) const {
    double x1 = r1 * t, x2 = r2 * t;
    double c = std::cos(x1), s = std::sin(x1), ch = std::cosh(x2), sh = std::sinh(x2);
    double p1 = std::pow(r1, order), p2 = std::pow(r2, order);
    bool even = order % 2 == 0;
    return C * (a1 * p1 * dcos(order, c, s) + a2 * p2 * (even ? ch : sh) + b1 * p1 * dsin(order, c, s) +
                b2 * p2 * (even ? sh : ch));
}

std::array<double, 5> TrigHyp::jet(double t) const {
    std::array<double, 5> j{};
    for (int k = 0; k < 5; ++k)
        j[k] = eval(t, k);
    return j;
}

SampledFn TrigHyp::sample(int order, std::size_t n) const {
    return SampledFn::sample([this, order](double t) { return eval(t, order); }, n);
}

ModeShape mode_shape(const LoadPoint& p0, double kappa, std::size_t grid) {
    require_critical(p0, kappa);
    auto w = wavenumbers(p0, kappa);
    double r1 = w.r1, r2 = w.r2;
    double c = kappa * p0.lambda1 / (1.0 - kappa * p0.lambda2);
    double num = r1 * r1 * std::cos(r1) + r2 * r2 * std::cosh(r2) + c * (std::cosh(r2) - std::cos(r1));
    double den = r1 * r1 * std::sin(r1) + r1 * r2 * std::sinh(r2) + c * (r1 / r2 * std::sinh(r2) - std::sin(r1));
    if (!(std::abs(den) > 1e-12))
        throw DegeneratePoint("mode-shape constant D has a vanishing denominator");

    ModeShape m;
    m.r1 = r1;
    m.r2 = r2;
    m.D = num / den;
    m.a1 = 1.0;
    m.a2 = -1.0;
    m.b1 = -m.D;
    m.b2 = m.D * r1 / r2;
    m.p0 = p0;
    m.kappa = kappa;
    m.C = 1.0 / raw_norm(m, grid);
    // y''(0) = -C (r1^2 + r2^2): positive curvature at the clamp.
    m.C = -m.C;
    return m;
}

AdjointKernel adjoint_kernel(int order, const LoadPoint& p0, double kappa, std::size_t grid) {
    if (order != 2 && order != 4)
        throw InvalidInput("adjoint kernel order must be 2 or 4");
    require_critical(p0, kappa);
    auto w = wavenumbers(p0, kappa);
    double r1 = w.r1, r2 = w.r2;
    double den = std::sin(r1) + r2 / r1 * std::sinh(r2);
    if (!(std::abs(den) > 1e-12))
        throw DegeneratePoint("adjoint kernel has a vanishing denominator");

    AdjointKernel q;
    q.order = order;
    q.r1 = r1;
    q.r2 = r2;
    q.E = (std::cos(r1) + r2 * r2 / (r1 * r1) * std::cosh(r2)) / den;
    q.p0 = p0;
    q.kappa = kappa;
    if (order == 2) {
        q.a1 = 1.0;
        q.a2 = r2 * r2 / (r1 * r1);
        q.b1 = -q.E;
        q.b2 = -q.E * r2 / r1;
        q.C = 1.0 / raw_norm(q, grid);
    } else {
        q.a1 = 1.0;
        q.a2 = -1.0;
        q.b1 = -q.E;
        q.b2 = q.E * r1 / r2;
        q.C = -1.0 / raw_norm(q, grid);
    }
    return q;
}

double LinearResidual::boundary_max() const {
    double m = 0.0;
    for (double b : boundary)
        m = std::max(m, std::abs(b));
    return m;
}

LinearResidual linear_residual_L4(const TrigHyp& y, const LoadPoint& p, double kappa, std::size_t grid) {
    auto k = operator_coeffs(p, kappa);
    LinearResidual r;
    for (std::size_t i = 0; i <= grid; ++i) {
        auto j = y.jet(static_cast<double>(i) / grid);
        r.interior = std::max(r.interior, std::abs(j[4] + k.A * j[2] - k.B * j[0]));
    }
    auto j0 = y.jet(0.0), j1 = y.jet(1.0);
    r.boundary = {j0[0], j0[1], j1[2] * k.d + kappa * p.lambda1 * j1[0],
                  j1[3] * k.d + (kappa * p.lambda1 + p.lambda2) * j1[1]};
    return r;
}

LinearResidual linear_residual_L4(const SampledFn& y, const LoadPoint& p, double kappa) {
    auto k = operator_coeffs(p, kappa);
    auto y1 = derivative(y, 1), y2 = derivative(y, 2), y3 = derivative(y, 3), y4 = derivative(y, 4);
    LinearResidual r;
    r.interior = (y4 + k.A * y2 - k.B * y).sup_norm();
    std::size_t n = y.intervals();
    r.boundary = {y[0], y1[0], y2[n] * k.d + kappa * p.lambda1 * y[n],
                  y3[n] * k.d + (kappa * p.lambda1 + p.lambda2) * y1[n]};
    return r;
}

SampledFn apply_L2(const SampledFn& y, const SampledFn& ydot, const SampledFn& yddot, const LoadPoint& p,
                   double kappa) {
    auto k = operator_coeffs(p, kappa);
    return yddot - k.B * (I2(y) - kappa * y) - (p.lambda2 / k.d) * I1(ydot);
}

SampledFn apply_L2_adjoint(const SampledFn& q, const SampledFn& qddot, const LoadPoint& p, double kappa) {
    auto k = operator_coeffs(p, kappa);
    return qddot - k.B * (K2(q) - kappa * q) + (p.lambda2 / k.d) * q;
}

double linear_residual_L2(const TrigHyp& y, const LoadPoint& p, double kappa, std::size_t grid) {
    return apply_L2(y.sample(0, grid), y.sample(1, grid), y.sample(2, grid), p, kappa).sup_norm();
}

double linear_residual_L2(const SampledFn& y, const LoadPoint& p, double kappa) {
    return apply_L2(y, derivative(y, 1), derivative(y, 2), p, kappa).sup_norm();
}

LinearResidual adjoint_residual(const AdjointKernel& q, std::size_t grid) {
    auto k = operator_coeffs(q.p0, q.kappa);
    const double l1 = q.p0.lambda1, l2 = q.p0.lambda2;
    LinearResidual r;
    auto j0 = q.jet(0.0), j1 = q.jet(1.0);
    if (q.order == 4) {
        for (std::size_t i = 0; i <= grid; ++i) {
            auto j = q.jet(static_cast<double>(i) / grid);
            r.interior = std::max(r.interior, std::abs(j[4] + k.A * j[2] - k.B * j[0]));
        }
        r.boundary = {j0[0], j0[1], j1[2], j1[3] + l2 / k.d * j1[1]};
        return r;
    }
    auto qs = q.sample(0, grid);
    r.interior = apply_L2_adjoint(qs, q.sample(2, grid), q.p0, q.kappa).sup_norm();
    double m0 = integral(qs);
    double m1 = inner_product(SampledFn::sample([](double t) { return t; }, grid), qs);
    r.boundary = {j1[0], j1[1] + l2 / k.d * m0, j1[2] + l1 / k.d * (m1 - m0),
                  j1[3] + (q.kappa * l1 + l2) / k.d * j1[1] - l1 / k.d * m0};
    return r;
}

int node_count(const SampledFn& slope) {
    double tiny = 1e-12 * slope.sup_norm();
    int count = 0, last = 0;
    for (std::size_t i = 1; i < slope.intervals(); ++i) {
        double v = slope[i];
        if (std::abs(v) <= tiny)
            continue;
        int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last)
            ++count;
        last = s;
    }
    return count;
}

int node_count(const TrigHyp& y, std::size_t grid) { return node_count(y.sample(1, grid)); }

}  // namespace nlrod
