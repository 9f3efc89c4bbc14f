#pragma once

#include "nlrod/quadrature.hpp"
#include "nlrod/rod_model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace nlrod {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    // Observations printed alongside the verdicts; they never affect the exit status.
    std::vector<std::string> info;

    bool all_passed() const;
};

// Reference critical points used by the regression checks.
struct ReferencePoint {
    double kappa = 0.0;
    LoadPoint p;
    int which = 1;  // root index passed to solve_lambda2
    double lambda2_lo = 0.0;
    std::string label;
    std::string expected_verdict;  // empty when no verdict is published
};

std::vector<ReferencePoint> kappa025_points();         // single monotone branch
std::vector<ReferencePoint> kappa045_points();         // lower, upper branch points (fold excluded)
std::vector<ReferencePoint> classification_points();  // points with a published verdict

AcceptanceReport run_acceptance(std::size_t grid = default_grid);
CriterionResult run_criterion(int id, std::size_t grid = default_grid);

}  // namespace nlrod
