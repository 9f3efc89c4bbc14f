#pragma once

#include "nlrod/quadrature.hpp"
#include "nlrod/rod_model.hpp"

#include <array>

namespace nlrod {

// C [a1 cos(r1 t) + a2 cosh(r2 t) + b1 sin(r1 t) + b2 sinh(r2 t)]
struct TrigHyp {
    double r1 = 0.0, r2 = 0.0;
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
    double C = 1.0;

    double eval(double t, int order = 0) const;
    std::array<double, 5> jet(double t) const;
    SampledFn sample(int order = 0, std::size_t n = default_grid) const;
};

struct ModeShape : TrigHyp {
    double D = 0.0;
    LoadPoint p0;
    double kappa = 0.0;
};

struct AdjointKernel : TrigHyp {
    int order = 2;
    double E = 0.0;
    LoadPoint p0;
    double kappa = 0.0;
};

ModeShape mode_shape(const LoadPoint& p0, double kappa, std::size_t grid = default_grid);
AdjointKernel adjoint_kernel(int order, const LoadPoint& p0, double kappa, std::size_t grid = default_grid);

struct LinearResidual {
    double interior = 0.0;
    std::array<double, 4> boundary{};
    double boundary_max() const;
};

LinearResidual linear_residual_L4(const TrigHyp& y, const LoadPoint& p, double kappa,
                                  std::size_t grid = default_grid);
LinearResidual linear_residual_L4(const SampledFn& y, const LoadPoint& p, double kappa);

double linear_residual_L2(const TrigHyp& y, const LoadPoint& p, double kappa, std::size_t grid = default_grid);
double linear_residual_L2(const SampledFn& y, const LoadPoint& p, double kappa);

// Second-order linear operator applied to sampled y with its slope.
SampledFn apply_L2(const SampledFn& y, const SampledFn& ydot, const SampledFn& yddot, const LoadPoint& p,
                   double kappa);
// Formal adjoint of apply_L2 for kernels vanishing at t = 1.
SampledFn apply_L2_adjoint(const SampledFn& q, const SampledFn& qddot, const LoadPoint& p, double kappa);

// Residual of the adjoint equation and its boundary set for the kernel's order.
LinearResidual adjoint_residual(const AdjointKernel& q, std::size_t grid = default_grid);

// Interior sign changes of a sampled slope.
int node_count(const SampledFn& slope);
int node_count(const TrigHyp& y, std::size_t grid = default_grid);

}  // namespace nlrod
