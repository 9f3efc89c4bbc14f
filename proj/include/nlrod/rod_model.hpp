#pragma once

#include <functional>
#include <utility>

namespace nlrod {

// Dimensionless load pair: lambda1 ~ angular velocity, lambda2 ~ axial tip force.
struct LoadPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

using CurvatureFn = std::function<double(double)>;

struct RodSetup {
    double kappa = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    CurvatureFn rho0;  // returns 1/rho0(t); empty means straight

    double curvature(double t) const { return rho0 ? rho0(t) : 0.0; }
};

struct PhysicalRod {
    double E = 0.0;
    double I = 0.0;
    double L = 0.0;
    double mu = 0.0;
    double ell = 0.0;
    double omega = 0.0;
    double H0 = 0.0;
    double V0 = 0.0;
    // Radius of initial curvature as a function of arclength S in metres.
    // Empty means straight. +-inf is accepted for flat segments.
    std::function<double(double)> R0_profile;
};

std::pair<RodSetup, LoadPoint> nondimensionalize(const PhysicalRod& rod);

// Curvature of the initial shape y = t^3 - 4/3 t^2 + 4/9 t used as the standard
// imperfection profile.
double fixture_curvature(double t);

}  // namespace nlrod
