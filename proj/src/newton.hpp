#pragma once

#include "nlrod/errors.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>

namespace nlrod::detail {

using Vec2 = std::array<double, 2>;

struct Newton2Options {
    int max_iter = 50;
    double tol = 1e-8;
    Vec2 fd_step{1e-6, 1e-6};
    Vec2 scale{1.0, 1.0};          // residual scaling for the merit function
    double max_step = 0.0;         // 0 means unlimited (per-component infinity norm)
};

inline double merit(const Vec2& r, const Vec2& scale) {
    return std::max(std::abs(r[0] / scale[0]), std::abs(r[1] / scale[1]));
}

// Damped Newton for two unknowns with forward-difference Jacobian. `valid`
// rejects iterates outside the admissible region (the step is halved).
inline Vec2 newton2(const std::function<Vec2(const Vec2&)>& F, Vec2 x, const Newton2Options& opt,
                    const std::function<bool(const Vec2&)>& valid, const std::string& what) {
    Vec2 r = F(x);
    for (int it = 0; it < opt.max_iter; ++it) {
        if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
            break;
        if (std::abs(r[0]) < opt.tol && std::abs(r[1]) < opt.tol)
            return x;

        double J[2][2];
        for (int k = 0; k < 2; ++k) {
            Vec2 xp = x;
            double h = opt.fd_step[k] * std::max(1.0, std::abs(x[k]));
            xp[k] += h;
            if (!valid(xp)) {
                xp[k] = x[k] - h;
                h = -h;
            }
            Vec2 rp = F(xp);
            J[0][k] = (rp[0] - r[0]) / h;
            J[1][k] = (rp[1] - r[1]) / h;
        }
        double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det))
            throw NoConvergence(what + ": singular Jacobian", {x[0], x[1]});
        Vec2 dx{-(J[1][1] * r[0] - J[0][1] * r[1]) / det, -(-J[1][0] * r[0] + J[0][0] * r[1]) / det};
        if (opt.max_step > 0.0) {
            double m = std::max(std::abs(dx[0]), std::abs(dx[1]));
            if (m > opt.max_step) {
                dx[0] *= opt.max_step / m;
                dx[1] *= opt.max_step / m;
            }
        }

        double f0 = merit(r, opt.scale);
        double lambda = 1.0;
        Vec2 xn{}, rn{};
        bool accepted = false;
        for (int half = 0; half < 30; ++half) {
            xn = {x[0] + lambda * dx[0], x[1] + lambda * dx[1]};
            if (valid(xn)) {
                rn = F(xn);
                if (std::isfinite(rn[0]) && std::isfinite(rn[1]) && merit(rn, opt.scale) < f0) {
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // No decrease along the Newton direction: accept the full step only
            // if residual is already at rounding level.
            if (f0 < 1e3 * opt.tol)
                return x;
            throw NoConvergence(what + ": line search failed", {x[0], x[1]});
        }
        x = xn;
        r = rn;
    }
    if (std::abs(r[0]) < opt.tol && std::abs(r[1]) < opt.tol)
        return x;
    throw NoConvergence(what + ": no convergence in " + std::to_string(opt.max_iter) + " iterations",
                        {x[0], x[1]});
}

// Extra full Newton steps on a converged point, kept while the residual drops.
inline Vec2 polish2(const std::function<Vec2(const Vec2&)>& F, Vec2 x, const Vec2& fd_step, int max_iter = 4) {
    Vec2 r = F(x);
    for (int it = 0; it < max_iter; ++it) {
        double J[2][2];
        for (int k = 0; k < 2; ++k) {
            Vec2 xp = x;
            double h = fd_step[k] * std::max(1.0, std::abs(x[k]));
            xp[k] += h;
            Vec2 rp = F(xp);
            J[0][k] = (rp[0] - r[0]) / h;
            J[1][k] = (rp[1] - r[1]) / h;
        }
        double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det))
            break;
        Vec2 xn{x[0] - (J[1][1] * r[0] - J[0][1] * r[1]) / det, x[1] - (-J[1][0] * r[0] + J[0][0] * r[1]) / det};
        Vec2 rn = F(xn);
        if (!(merit(rn, {1.0, 1.0}) < merit(r, {1.0, 1.0})))
            break;
        x = xn;
        r = rn;
    }
    return x;
}

}  // namespace nlrod::detail
