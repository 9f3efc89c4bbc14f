#pragma once

#include "nlrod/lin_modes.hpp"

#include <optional>
#include <string>

namespace nlrod {

enum class Verdict { Supercritical, Subcritical, Degenerate };
std::string to_string(Verdict v);

struct ReductionCoefficients {
    double c11 = 0.0, c12 = 0.0, c13 = 0.0, c3 = 0.0;
    double eta_prime = 0.0;
    // c11 + c12*eta'. Vanishes for the exact kernel; kept as a diagnostic.
    double tangent_linear = 0.0;
    // Unit normal into the post-critical side and the linear coefficient along it.
    double normal1 = 0.0, normal2 = 0.0;
    double transverse_linear = 0.0;
    // (c11, c12) = mu * grad(char_residual)
    double mu = 0.0;
    int epsilon = 0;
    int delta = 0;
    Verdict verdict = Verdict::Degenerate;
    int kernel_order = 2;
};

constexpr double degenerate_tol = 1e-10;

// Kernel of order 2 pairs directly; order 4 pairs the fourth-order form of
// each term so both kernels represent the same functional up to a factor.
ReductionCoefficients reduction_coefficients(const LoadPoint& p0, double kappa, const TrigHyp& yL,
                                             const AdjointKernel& q, std::size_t grid = default_grid);

Verdict classify_pitchfork(int epsilon, int delta);
Verdict classify_pitchfork(const ReductionCoefficients& rc);

// Amplitude for a pure lambda1 offset at fixed lambda2.
std::optional<double> bifurcation_amplitude(const ReductionCoefficients& rc, double delta_lambda1);
// Amplitude for a general load offset from the critical point.
std::optional<double> bifurcation_amplitude(const ReductionCoefficients& rc, const LoadPoint& offset);
// Amplitude predicted from the characteristic residual at the target load.
std::optional<double> amplitude_from_residual(const ReductionCoefficients& rc, double residual_at_target);

// Pairing used by the reduction: <F, q> or its fourth-order counterpart.
double kernel_pairing(const SampledFn& F, const AdjointKernel& q);

}  // namespace nlrod
