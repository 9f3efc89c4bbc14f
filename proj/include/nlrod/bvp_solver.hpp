#pragma once

#include "nlrod/ls_reduction.hpp"
#include "nlrod/quadrature.hpp"
#include "nlrod/rod_model.hpp"

#include <array>
#include <string>
#include <vector>

namespace nlrod {

struct RodState {
    double x = 0.0, y = 0.0, theta = 0.0, v = 0.0, m = 0.0;
};

using Trajectory = std::vector<RodState>;

struct BvpSolution {
    Trajectory trajectory;
    LoadPoint load;
    RodSetup setup;
    double v0 = 0.0, m0 = 0.0;
    std::array<double, 2> terminal{};  // v(1) - alpha2, m(1)
    double m2_residual = 0.0;
    int iterations = 0;
};

struct ShootOptions {
    std::size_t n_steps = default_grid;
    double tol = 1e-9;
    int max_iter = 50;
    bool nontrivial = false;  // exclude the straight solution (perfect rod)
};

enum class Direction { along_lambda1, along_lambda2, fixed_lambda2, fixed_lambda1 };
std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

RodState reduce_rhs(const RodState& s, const LoadPoint& p, const RodSetup& setup, double t);
Trajectory integrate(const LoadPoint& p, const RodSetup& setup, double v0, double m0,
                     std::size_t n_steps = default_grid);
BvpSolution shoot(const LoadPoint& p, const RodSetup& setup, double guess_v0, double guess_m0,
                  const ShootOptions& opt = {});

// Load reached from the critical point p0 for the given offset scheme.
LoadPoint offset_load(const LoadPoint& p0, double kappa, double delta, Direction direction);

BvpSolution solve_postbuckling(const LoadPoint& p0, double kappa, double delta, Direction direction, int sign,
                               const ShootOptions& opt = {});

double residual_M2(const BvpSolution& sol);
double residual_M2(const SampledFn& y, const LoadPoint& p, const RodSetup& setup);

double linear_shooting_determinant(const LoadPoint& p, double kappa, std::size_t n_steps = default_grid);

SampledFn deflection(const BvpSolution& sol);
double tip_deflection(const BvpSolution& sol);
int node_count(const BvpSolution& sol);

}  // namespace nlrod
