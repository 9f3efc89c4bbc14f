#include "nlrod/rod_model.hpp"

#include "nlrod/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace nlrod {

namespace {
constexpr int profile_samples = 10001;
}

std::pair<RodSetup, LoadPoint> nondimensionalize(const PhysicalRod& rod) {
    if (!(rod.E > 0.0) || !(rod.I > 0.0) || !(rod.L > 0.0) || !(rod.mu > 0.0))
        throw InvalidInput("E, I, L and mu must be positive");
    if (!(rod.ell >= 0.0))
        throw InvalidInput("nonlocal length scale must be nonnegative");

    const double EI = rod.E * rod.I;
    const double L2 = rod.L * rod.L;

    RodSetup setup;
    setup.kappa = (rod.ell / rod.L) * (rod.ell / rod.L);
    setup.alpha2 = rod.V0 * L2 / EI;

    LoadPoint p;
    p.lambda1 = rod.mu * rod.omega * rod.omega * L2 * L2 / EI;
    p.lambda2 = rod.H0 * L2 / EI;

    if (!rod.R0_profile)
        return {setup, p};

    // Dimensionless radius R0(tL)/L sampled on a uniform grid.
    std::vector<double> radius(profile_samples);
    double sup = 0.0;
    for (int i = 0; i < profile_samples; ++i) {
        double t = static_cast<double>(i) / (profile_samples - 1);
        double r = rod.R0_profile(t * rod.L) / rod.L;
        if (std::isnan(r) || r == 0.0)
            throw SingularCurvature("initial-curvature radius vanishes at t = " + std::to_string(t));
        radius[i] = r;
        sup = std::max(sup, std::abs(r));
    }

    if (std::isinf(sup)) {
        // Unbounded radius somewhere: the shape amplitude 1/sup collapses to zero.
        setup.alpha1 = 0.0;
        return {setup, p};
    }

    setup.alpha1 = 1.0 / sup;
    auto profile = rod.R0_profile;
    const double L = rod.L;
    setup.rho0 = [profile, L, sup](double t) {
        double r = profile(t * L) / L;
        return sup / r;
    };
    return {setup, p};
}

double fixture_curvature(double t) {
    double slope = 3.0 * t * t - 8.0 / 3.0 * t + 4.0 / 9.0;
    return (6.0 * t - 8.0 / 3.0) / std::sqrt(1.0 - slope * slope);
}

}  // namespace nlrod
