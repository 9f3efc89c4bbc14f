#include "nlrod/ls_reduction.hpp"

#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"

#include <cmath>

namespace nlrod {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Supercritical: return "Supercritical";
        case Verdict::Subcritical: return "Subcritical";
        default: return "Degenerate";
    }
}

namespace {
int sign(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }
}  // namespace

double kernel_pairing(const SampledFn& F, const AdjointKernel& q) {
    std::size_t n = F.intervals();
    auto qs = q.sample(0, n);
    if (q.order == 2)
        return inner_product(F, qs);
    auto Fdd = derivative(F, 2);
    auto Fd = derivative(F, 1);
    return inner_product(Fdd, qs) + F[n] * q.eval(1.0, 1) - Fd[n] * q.eval(1.0, 0);
}

ReductionCoefficients reduction_coefficients(const LoadPoint& p0, double kappa, const TrigHyp& yL,
                                             const AdjointKernel& q, std::size_t grid) {
    const double d = 1.0 - kappa * p0.lambda2;
    if (!(d > 0.0))
        throw DomainError("1 - kappa*lambda2 <= 0: singular denominator");
    const double l1 = p0.lambda1, l2 = p0.lambda2;

    ReductionCoefficients rc;
    rc.kernel_order = q.order;
    rc.eta_prime = eta_prime(p0, kappa);

    auto y = yL.sample(0, grid);
    auto yd = yL.sample(1, grid);
    auto i1y = I1(y);
    auto i2y = I1(i1y);
    auto i1yd = I1(yd);
    auto i3y = I1(yd * yd * i1y);
    auto shifted = i2y - kappa * y;  // I2 y - kappa y
    auto x_term = l1 * shifted + l2 * i1yd;

    rc.c11 = -kernel_pairing(shifted, q) / d;
    double xq = kernel_pairing(x_term, q);
    rc.c12 = -kernel_pairing(i1yd, q) / d - kappa * xq / (d * d);
    rc.c13 = kappa * kappa * xq / (d * d * d);

    auto yd2 = yd * yd;
    SampledFn local = l1 * (i3y + yd2 * (i2y - 2.0 * kappa * y)) + l2 * yd2 * i1yd;
    SampledFn nonlocal = 2.0 * l1 * l1 * yd * i1y * shifted + l1 * l2 * yd * (yd * shifted + 2.0 * i1y * i1yd) +
                         l2 * l2 * yd2 * i1yd;
    SampledFn cubic = 0.5 * (local * (1.0 / d) + (kappa / (d * d)) * nonlocal);
    rc.c3 = kernel_pairing(cubic, q);

    rc.tangent_linear = rc.c11 + rc.c12 * rc.eta_prime;
    auto g = char_gradient(p0, kappa);
    double gn = std::hypot(g.d1, g.d2);
    rc.normal1 = -g.d1 / gn;
    rc.normal2 = -g.d2 / gn;
    rc.transverse_linear = rc.c11 * rc.normal1 + rc.c12 * rc.normal2;
    rc.mu = (rc.c11 * g.d1 + rc.c12 * g.d2) / (gn * gn);

    rc.epsilon = std::abs(rc.c3) < degenerate_tol ? 0 : sign(rc.c3);
    rc.delta = std::abs(rc.transverse_linear) < degenerate_tol ? 0 : sign(rc.transverse_linear);
    rc.verdict = classify_pitchfork(rc.epsilon, rc.delta);
    return rc;
}

Verdict classify_pitchfork(int epsilon, int delta) {
    if (epsilon == 0 || delta == 0)
        return Verdict::Degenerate;
    return epsilon * delta < 0 ? Verdict::Supercritical : Verdict::Subcritical;
}

Verdict classify_pitchfork(const ReductionCoefficients& rc) {
    int e = std::abs(rc.c3) < degenerate_tol ? 0 : sign(rc.c3);
    int dl = std::abs(rc.transverse_linear) < degenerate_tol ? 0 : sign(rc.transverse_linear);
    return classify_pitchfork(e, dl);
}

namespace {
std::optional<double> amplitude(const ReductionCoefficients& rc, double linear) {
    if (classify_pitchfork(rc) == Verdict::Degenerate)
        throw DegeneratePoint("degenerate pitchfork: no amplitude prediction");
    double rad = -linear / rc.c3;
    if (rad == 0.0)
        return 0.0;
    if (!(rad > 0.0))
        return std::nullopt;
    return std::sqrt(rad);
}
}  // namespace

std::optional<double> bifurcation_amplitude(const ReductionCoefficients& rc, double delta_lambda1) {
    return amplitude(rc, rc.c11 * delta_lambda1);
}

std::optional<double> bifurcation_amplitude(const ReductionCoefficients& rc, const LoadPoint& offset) {
    return amplitude(rc, rc.c11 * offset.lambda1 + rc.c12 * offset.lambda2 + rc.c13 * offset.lambda2 * offset.lambda2);
}

std::optional<double> amplitude_from_residual(const ReductionCoefficients& rc, double residual_at_target) {
    return amplitude(rc, rc.mu * residual_at_target);
}

}  // namespace nlrod
