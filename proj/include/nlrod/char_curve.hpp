#pragma once

#include "nlrod/rod_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlrod {

struct Wavenumbers {
    double r1 = 0.0;
    double r2 = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct Partials {
    double d1 = 0.0;  // d/dlambda1
    double d2 = 0.0;  // d/dlambda2
};

enum class BranchTag { single, lower, upper };
std::string to_string(BranchTag tag);

struct CurvePoint {
    LoadPoint p;
    double eta_prime = 0.0;  // NaN where the slope is undefined
};

struct BranchCurve {
    double kappa = 0.0;
    int mode_index = 1;
    std::vector<CurvePoint> points;
    BranchTag branch_tag = BranchTag::single;
    std::optional<LoadPoint> fold;
};

struct KappaCritical {
    double kappa = 0.0;
    double lambda1 = 0.0;
};

// Largest admissible lambda2 (1 - kappa*lambda2 bounded away from zero).
double lambda2_limit(double kappa);

Wavenumbers wavenumbers(const LoadPoint& p, double kappa);

// Characteristic residual with the sqrt(lambda1/d) prefactor removed.
double char_residual(const LoadPoint& p, double kappa);
// Full characteristic function including the prefactor.
double char_f(const LoadPoint& p, double kappa);

// Central differences of char_residual; h <= 0 selects 1e-6*max(1,|lambda_i|).
Partials char_partials(const LoadPoint& p, double kappa, double h = 0.0);
// Exact partials of char_residual by complex-step differentiation.
Partials char_gradient(const LoadPoint& p, double kappa);

// Slope of the critical curve lambda2 = eta(lambda1).
double eta_prime(const LoadPoint& p0, double kappa);

// All roots of char_residual in lambda2 over the bracket, ascending.
std::vector<double> lambda2_roots(double lambda1, double kappa, std::optional<Interval> bracket = {},
                                  int panels = 2000);
double solve_lambda2(double lambda1, double kappa, std::optional<Interval> bracket = {}, int which = 1);
double solve_lambda1(double lambda2, double kappa, std::optional<Interval> bracket = {}, int which = 1);

struct TraceOptions {
    double lambda2_lo = 0.0;
    std::optional<double> lambda2_hi;
    int panels = 2000;
};

std::vector<BranchCurve> trace_curve(double kappa, const std::vector<double>& lambda1_grid, int mode_index,
                                     const TraceOptions& opt = {});

// Continuation of the first-mode curve from lambda1 = 0.05 inside lambda2 >= 0.
struct FirstModeTrack {
    enum class End { exited, folded, limit };
    End end = End::limit;
    std::vector<LoadPoint> points;
    std::optional<LoadPoint> fold;
};
FirstModeTrack track_first_mode(double kappa, double lambda1_max = 200.0);

LoadPoint find_fold(double kappa, const LoadPoint& guess);
// Fold of the first-mode curve located by continuation, without a seed.
LoadPoint find_fold(double kappa);
LoadPoint find_branch_minimum(double kappa, const LoadPoint& guess);
LoadPoint find_branch_minimum(double kappa);
KappaCritical find_kappa_cr(double guess_kappa = 0.375, double guess_lambda1 = 29.0);

}  // namespace nlrod
