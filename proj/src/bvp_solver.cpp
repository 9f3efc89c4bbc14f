#include "nlrod/bvp_solver.hpp"

#include "newton.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"

#include <cmath>
#include <numbers>

namespace nlrod {

std::string to_string(Direction d) {
    switch (d) {
        case Direction::along_lambda1: return "along-lambda1";
        case Direction::along_lambda2: return "along-lambda2";
        case Direction::fixed_lambda2: return "fixed-lambda2";
        default: return "fixed-lambda1";
    }
}

Direction direction_from_string(const std::string& s) {
    for (auto d : {Direction::along_lambda1, Direction::along_lambda2, Direction::fixed_lambda2,
                   Direction::fixed_lambda1})
        if (s == to_string(d))
            return d;
    throw InvalidInput("unknown offset direction '" + s + "'");
}

RodState reduce_rhs(const RodState& s, const LoadPoint& p, const RodSetup& setup, double t) {
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    const double k = setup.kappa;
    double den = 1.0 + k * (s.v * sn - p.lambda2 * c);
    if (!(std::abs(den) >= 1e-8))
        throw IntegrationError("constitutive singularity: vanishing denominator", t);
    RodState d;
    d.x = c;
    d.y = sn;
    d.theta = (s.m - k * p.lambda1 * s.y * c + setup.alpha1 * setup.curvature(t)) / den;
    d.v = -p.lambda1 * s.y;
    d.m = -s.v * c - p.lambda2 * sn;
    return d;
}

namespace {

RodState axpy(const RodState& a, double h, const RodState& d) {
    return {a.x + h * d.x, a.y + h * d.y, a.theta + h * d.theta, a.v + h * d.v, a.m + h * d.m};
}

std::array<double, 2> terminal_residual(const Trajectory& tr, const RodSetup& setup) {
    return {tr.back().v - setup.alpha2, tr.back().m};
}

}  // namespace

Trajectory integrate(const LoadPoint& p, const RodSetup& setup, double v0, double m0, std::size_t n_steps) {
    if (n_steps < 2 || n_steps % 2 != 0)
        throw InvalidInput("step count must be even");
    const double h = 1.0 / static_cast<double>(n_steps);
    Trajectory tr(n_steps + 1);
    tr[0] = {0.0, 0.0, 0.0, v0, m0};
    for (std::size_t i = 0; i < n_steps; ++i) {
        double t = i * h;
        const RodState& s = tr[i];
        RodState k1 = reduce_rhs(s, p, setup, t);
        RodState k2 = reduce_rhs(axpy(s, 0.5 * h, k1), p, setup, t + 0.5 * h);
        RodState k3 = reduce_rhs(axpy(s, 0.5 * h, k2), p, setup, t + 0.5 * h);
        RodState k4 = reduce_rhs(axpy(s, h, k3), p, setup, t + h);
        RodState n;
        n.x = s.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        n.y = s.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
        n.theta = s.theta + h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
        n.v = s.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
        n.m = s.m + h / 6.0 * (k1.m + 2 * k2.m + 2 * k3.m + k4.m);
        if (!(std::abs(n.theta) < 0.5 * std::numbers::pi))
            throw IntegrationError("tangent angle left (-pi/2, pi/2)", t + h);
        tr[i + 1] = n;
    }
    return tr;
}

namespace {

BvpSolution finish(Trajectory tr, const LoadPoint& p, const RodSetup& setup, double v0, double m0, int iters) {
    BvpSolution sol;
    sol.trajectory = std::move(tr);
    sol.load = p;
    sol.setup = setup;
    sol.v0 = v0;
    sol.m0 = m0;
    sol.terminal = terminal_residual(sol.trajectory, setup);
    sol.iterations = iters;
    sol.m2_residual = residual_M2(sol);
    return sol;
}

}  // namespace

BvpSolution shoot(const LoadPoint& p, const RodSetup& setup, double guess_v0, double guess_m0,
                  const ShootOptions& opt) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    int evals = 0;
    auto R = [&](double v0, double m0) -> detail::Vec2 {
        ++evals;
        try {
            auto tr = integrate(p, setup, v0, m0, opt.n_steps);
            auto r = terminal_residual(tr, setup);
            return {r[0], r[1]};
        } catch (const IntegrationError&) {
            return {nan, nan};
        }
    };

    detail::Newton2Options nopt;
    nopt.max_iter = opt.max_iter;
    nopt.tol = opt.tol;
    nopt.fd_step = {1e-7, 1e-7};
    auto anywhere = [](const detail::Vec2&) { return true; };

    double v0 = guess_v0, m0 = guess_m0;
    if (opt.nontrivial) {
        // Polar unknowns (r, phi) scaled by the seed; the residual divided by r
        // has no root at the straight configuration.
        double sv = std::max(std::abs(guess_v0), 1e-3 * std::abs(guess_m0));
        double sm = std::max(std::abs(guess_m0), 1e-3 * std::abs(guess_v0));
        if (!(sv > 0.0) || !(sm > 0.0))
            throw InvalidInput("nontrivial shooting needs a nonzero seed");
        auto G = [&](const detail::Vec2& x) -> detail::Vec2 {
            auto r = R(x[0] * sv * std::cos(x[1]), x[0] * sm * std::sin(x[1]));
            return {r[0] / x[0], r[1] / x[0]};
        };
        detail::Newton2Options popt = nopt;
        popt.tol = 0.1 * opt.tol;
        popt.max_step = 0.5;
        detail::Vec2 x0{1.0, std::atan2(guess_m0 / sm, guess_v0 / sv)};
        auto x = detail::newton2(G, x0, popt, [](const detail::Vec2& x) { return x[0] > 1e-8; },
                                 "nontrivial shooting");
        v0 = x[0] * sv * std::cos(x[1]);
        m0 = x[0] * sm * std::sin(x[1]);
    }
    auto u = detail::newton2([&](const detail::Vec2& x) { return R(x[0], x[1]); }, {v0, m0}, nopt, anywhere,
                             "shooting");
    u = detail::polish2([&](const detail::Vec2& x) { return R(x[0], x[1]); }, u, nopt.fd_step);
    auto tr = integrate(p, setup, u[0], u[1], opt.n_steps);
    return finish(std::move(tr), p, setup, u[0], u[1], evals);
}

LoadPoint offset_load(const LoadPoint& p0, double kappa, double delta, Direction direction) {
    switch (direction) {
        case Direction::along_lambda1:
            return {p0.lambda1 + delta, p0.lambda2 + eta_prime(p0, kappa) * delta};
        case Direction::along_lambda2: {
            auto g = char_gradient(p0, kappa);
            if (!(std::abs(g.d1) > 1e-6 * std::hypot(g.d1, g.d2)))
                throw DegeneratePoint("curve is horizontal: lambda1 is not a function of lambda2 here");
            return {p0.lambda1 - g.d2 / g.d1 * delta, p0.lambda2 + delta};
        }
        case Direction::fixed_lambda2:
            return {p0.lambda1 + delta, p0.lambda2};
        default:
            return {p0.lambda1, p0.lambda2 + delta};
    }
}

BvpSolution solve_postbuckling(const LoadPoint& p0, double kappa, double delta, Direction direction, int sign,
                               const ShootOptions& opt) {
    if (sign != 1 && sign != -1)
        throw InvalidInput("branch sign must be +1 or -1");
    auto yL = mode_shape(p0, kappa, opt.n_steps);
    auto q = adjoint_kernel(2, p0, kappa, opt.n_steps);
    auto rc = reduction_coefficients(p0, kappa, yL, q, opt.n_steps);
    if (rc.verdict == Verdict::Degenerate)
        throw DegeneratePoint("degenerate pitchfork: amplitude seed unavailable");

    RodSetup setup;
    setup.kappa = kappa;
    const double int_y = integral(yL.sample(0, opt.n_steps));
    const double ydd0 = yL.eval(0.0, 2);

    auto seed_for = [&](double dl) -> std::pair<LoadPoint, double> {
        LoadPoint p = offset_load(p0, kappa, dl, direction);
        auto a = amplitude_from_residual(rc, char_residual(p, kappa));
        if (!a || *a == 0.0)
            throw NotFound("no small-amplitude branch on this side of the critical point (" + to_string(direction) +
                           ", delta = " + std::to_string(dl) + ")");
        return {p, sign * *a};
    };

    ShootOptions sopt = opt;
    sopt.nontrivial = true;
    auto [p, a] = seed_for(delta);
    auto seed_v0 = [&](const LoadPoint& pp, double aa) { return pp.lambda1 * aa * int_y; };
    auto seed_m0 = [&](const LoadPoint& pp, double aa) { return aa * ydd0 * (1.0 - kappa * pp.lambda2); };

    try {
        return shoot(p, setup, seed_v0(p, a), seed_m0(p, a), sopt);
    } catch (const ConvergenceError&) {
    }

    // Geometric continuation in the offset.
    const double fractions[] = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
    auto [p1, a1] = seed_for(delta * fractions[0]);
    BvpSolution sol = shoot(p1, setup, seed_v0(p1, a1), seed_m0(p1, a1), sopt);
    for (int k = 1; k < 5; ++k) {
        LoadPoint pk = offset_load(p0, kappa, delta * fractions[k], direction);
        double grow = std::sqrt(fractions[k] / fractions[k - 1]);
        sol = shoot(pk, setup, sol.v0 * grow, sol.m0 * grow, sopt);
    }
    return sol;
}

SampledFn deflection(const BvpSolution& sol) {
    std::vector<double> y(sol.trajectory.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = sol.trajectory[i].y;
    return SampledFn(std::move(y));
}

double residual_M2(const SampledFn& y, const LoadPoint& p, const RodSetup& setup) {
    auto yd = derivative(y, 1);
    auto ydd = derivative(y, 2);
    for (std::size_t i = 0; i < yd.size(); ++i)
        if (!(std::abs(yd[i]) < 1.0))
            throw InadmissibleSlope("slope magnitude reaches 1 at t = " + std::to_string(yd.t(i)));
    const double k = setup.kappa;
    auto s = yd.map([](double v) { return std::sqrt(1.0 - v * v); });
    auto curv = SampledFn::sample([&setup](double t) { return setup.curvature(t); }, y.intervals());
    auto i1y = I1(y);
    auto num = setup.alpha1 * curv + setup.alpha2 * J1(yd) + p.lambda1 * (J2(y, yd) - k * y * s) +
               p.lambda2 * I1(yd);
    SampledFn den = SampledFn(y.intervals(), 1.0) + (k * setup.alpha2) * yd + (k * p.lambda1) * yd * i1y -
                    (k * p.lambda2) * s;
    SampledFn r = ydd;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= s[i] * num[i] / den[i];
    return r.sup_norm();
}

double residual_M2(const BvpSolution& sol) { return residual_M2(deflection(sol), sol.load, sol.setup); }

double linear_shooting_determinant(const LoadPoint& p, double kappa, std::size_t n_steps) {
    const double d = 1.0 - kappa * p.lambda2;
    if (!(d > 0.0))
        throw DomainError("1 - kappa*lambda2 <= 0: singular denominator");
    const double A = (kappa * p.lambda1 + p.lambda2) / d, B = p.lambda1 / d;
    using V = std::array<double, 4>;
    auto f = [A, B](const V& z) { return V{z[1], z[2], z[3], -A * z[2] + B * z[0]}; };
    auto run = [&](V z) {
        const double h = 1.0 / static_cast<double>(n_steps);
        for (std::size_t i = 0; i < n_steps; ++i) {
            V k1 = f(z), z2, z3, z4;
            for (int c = 0; c < 4; ++c) z2[c] = z[c] + 0.5 * h * k1[c];
            V k2 = f(z2);
            for (int c = 0; c < 4; ++c) z3[c] = z[c] + 0.5 * h * k2[c];
            V k3 = f(z3);
            for (int c = 0; c < 4; ++c) z4[c] = z[c] + h * k3[c];
            V k4 = f(z4);
            for (int c = 0; c < 4; ++c) z[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        }
        return z;
    };
    V a = run({0, 0, 1, 0}), b = run({0, 0, 0, 1});
    auto bc3 = [&](const V& z) { return z[2] * d + kappa * p.lambda1 * z[0]; };
    auto bc4 = [&](const V& z) { return z[3] * d + (kappa * p.lambda1 + p.lambda2) * z[1]; };
    return bc3(a) * bc4(b) - bc3(b) * bc4(a);
}

double tip_deflection(const BvpSolution& sol) { return sol.trajectory.back().y; }

int node_count(const BvpSolution& sol) {
    std::vector<double> s(sol.trajectory.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = std::sin(sol.trajectory[i].theta);
    return node_count(SampledFn(std::move(s)));
}

}  // namespace nlrod
