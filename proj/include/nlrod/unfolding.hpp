#pragma once

#include "nlrod/ls_reduction.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nlrod {

struct UnfoldingCoefficients {
    double d01 = 0, d02 = 0;
    double d11 = 0, d12 = 0, d13 = 0, d14 = 0;
    double d21 = 0, d22 = 0, d23 = 0, d24 = 0, d25 = 0, d26 = 0;
    double d31 = 0, d32 = 0, d33 = 0, d34 = 0, d35 = 0, d36 = 0, d37 = 0, d38 = 0, d39 = 0, d310 = 0;

    // Name/value table. The cubic-load row is also listed as d51/d52, the
    // a*(dl2)^2 row as d34'/d35', matching the labels of the unfolding polynomial.
    std::vector<std::pair<std::string, double>> table() const;
};

UnfoldingCoefficients unfolding_coefficients(const LoadPoint& p0, double kappa, const TrigHyp& yL,
                                             const AdjointKernel& q, const CurvatureFn& rho0,
                                             std::size_t grid = default_grid);

double unfolding_determinant(const UnfoldingCoefficients& uc);

struct UnfoldingCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct UnfoldingDecision {
    bool universal = false;
    std::string reason;  // empty when universal
    std::vector<UnfoldingCheck> checks;
};

UnfoldingDecision is_universal_unfolding(const ReductionCoefficients& rc, const UnfoldingCoefficients& uc);

// Truncated unfolding polynomial in the amplitude, load offsets and imperfections.
double unfolding_polynomial(const ReductionCoefficients& rc, const UnfoldingCoefficients& uc, double a, double dl1,
                            double dl2, double alpha1, double alpha2);

}  // namespace nlrod
