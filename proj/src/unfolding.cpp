#include "nlrod/unfolding.hpp"

#include "nlrod/errors.hpp"

#include <cmath>

namespace nlrod {

std::vector<std::pair<std::string, double>> UnfoldingCoefficients::table() const {
    return {{"d01", d01}, {"d02", d02}, {"d11", d11}, {"d12", d12}, {"d13", d13},   {"d14", d14},
            {"d21", d21}, {"d22", d22}, {"d23", d23}, {"d24", d24}, {"d25", d25},   {"d26", d26},
            {"d31", d31}, {"d32", d32}, {"d33", d33}, {"d34", d34}, {"d35", d35},   {"d36", d36},
            {"d37", d37}, {"d38", d38}, {"d39", d39}, {"d310", d310}, {"d34'", d37}, {"d35'", d38},
            {"d51", d39}, {"d52", d310}};
}

UnfoldingCoefficients unfolding_coefficients(const LoadPoint& p0, double kappa, const TrigHyp& yL,
                                             const AdjointKernel& q, const CurvatureFn& rho0, std::size_t grid) {
    const double d = 1.0 - kappa * p0.lambda2;
    if (!(d > 0.0))
        throw DomainError("1 - kappa*lambda2 <= 0: singular denominator");
    const double l1 = p0.lambda1, l2 = p0.lambda2;
    const double kd = kappa / d;

    SampledFn curv(grid, 0.0);
    if (rho0) {
        for (std::size_t i = 0; i <= grid; ++i) {
            double v = rho0(static_cast<double>(i) / grid);
            if (!std::isfinite(v))
                throw SingularCurvature("curvature profile is not finite at t = " + std::to_string(curv.t(i)));
            curv[i] = v;
        }
    }
    auto arm = SampledFn::sample([](double t) { return 1.0 - t; }, grid);

    auto y = yL.sample(0, grid);
    auto yd = yL.sample(1, grid);
    auto yd2 = yd * yd;
    auto i1y = I1(y);
    auto i2y = I1(i1y);
    auto i1yd = I1(yd);
    auto i1yd2 = I1(yd2);
    // 2 lambda1 ((1-t) I1y + I2y - kappa y) + lambda2 ((1-t) y' + 2 I1 y')
    auto arm_term = 2.0 * l1 * (arm * i1y + i2y - kappa * y) + l2 * (arm * yd + 2.0 * i1yd);
    auto pair = [&q](const SampledFn& F) { return kernel_pairing(F, q); };

    UnfoldingCoefficients u;
    u.d01 = -pair(curv) / d;
    u.d02 = -pair(arm) / d;
    u.d11 = kd / d * pair(curv * yd);
    u.d12 = kd / d * pair(arm * yd);
    u.d13 = -kd * u.d01;
    u.d14 = -kd * u.d02;
    u.d21 = 0.5 / d * pair(curv * yd * (yd + kd * (2.0 * l1 * i1y + l2 * yd)));
    u.d22 = 0.5 / d * pair(arm * yd2 + i1yd2 + kd * yd * arm_term);
    u.d23 = (1.0 - kd) * u.d11;
    u.d24 = (1.0 - kd) * u.d12;
    u.d25 = kd * kd * u.d01;
    u.d26 = kd * kd * u.d02;
    u.d31 = 0.5 * kd / d * pair(curv * yd2 * yd);
    u.d32 = 0.5 * kd / d * pair(yd * (arm * yd2 - i1yd2));
    u.d33 = kd / d * pair(curv * yd * i1y);
    u.d34 = kd / d * pair(yd * (arm * i1y + i2y - kappa * y));
    u.d35 = -0.5 * kd * kd / d * pair(curv * yd * (2.0 * l1 * i1y + l2 * yd));
    u.d36 = 0.5 * kd / d * pair(2.0 * yd * i1yd - i1yd2 - kd * yd * arm_term);
    u.d37 = -(1.0 - 2.0 * kd) * u.d11;
    u.d38 = -(1.0 - 2.0 * kd) * u.d12;
    u.d39 = kd * kd * kd * u.d01;
    u.d310 = kd * kd * kd * u.d02;
    return u;
}

double unfolding_determinant(const UnfoldingCoefficients& uc) { return uc.d01 * uc.d22 - uc.d21 * uc.d02; }

UnfoldingDecision is_universal_unfolding(const ReductionCoefficients& rc, const UnfoldingCoefficients& uc) {
    UnfoldingDecision dec;
    auto add = [&dec](const std::string& name, double v, double tol) {
        dec.checks.push_back({name, v, tol, std::abs(v) > tol});
    };
    add("c3", rc.c3, degenerate_tol);
    add("transverse_linear", rc.transverse_linear, degenerate_tol);
    add("determinant", unfolding_determinant(uc), 1e-8);
    if (!dec.checks[0].passed || !dec.checks[1].passed)
        dec.reason = "c-condition";
    else if (!dec.checks[2].passed)
        dec.reason = "determinant";
    dec.universal = dec.reason.empty();
    return dec;
}

double unfolding_polynomial(const ReductionCoefficients& rc, const UnfoldingCoefficients& u, double a, double dl1,
                            double dl2, double al1, double al2) {
    double a2 = a * a, a3 = a2 * a;
    return al1 * u.d01 + al2 * u.d02 + a * (al1 * al2 * u.d11 + al2 * al2 * u.d12) +
           dl2 * (al1 * u.d13 + al2 * u.d14) + a2 * (al1 * u.d21 + al2 * u.d22) + a * dl1 * rc.c11 +
           a * dl2 * (rc.c12 + al1 * al2 * u.d23 + al2 * al2 * u.d24) + dl2 * dl2 * (al1 * u.d25 + al2 * u.d26) +
           a3 * (rc.c3 + al1 * al2 * u.d31 + al2 * al2 * u.d32) + a2 * dl1 * (al1 * u.d33 + al2 * u.d34) +
           a2 * dl2 * (al1 * u.d35 + al2 * u.d36) + a * dl2 * dl2 * (rc.c13 + al1 * al2 * u.d37 + al2 * al2 * u.d38) +
           dl2 * dl2 * dl2 * (al1 * u.d39 + al2 * u.d310);
}

}  // namespace nlrod
