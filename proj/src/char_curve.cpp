#include "nlrod/char_curve.hpp"

#include "newton.hpp"
#include "nlrod/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

namespace nlrod {

namespace {

using cplx = std::complex<double>;
constexpr double cs_step = 1e-30;

double real_part(double x) { return x; }
double real_part(const cplx& x) { return x.real(); }

void check_admissible(const LoadPoint& p, double kappa) {
    if (kappa < 0.0)
        throw InvalidInput("non-locality parameter must be nonnegative");
    if (p.lambda1 < 0.0)
        throw DomainError("lambda1 must be nonnegative");
    if (!(1.0 - kappa * p.lambda2 > 0.0))
        throw DomainError("1 - kappa*lambda2 <= 0: singular denominator");
}

// Squared wavenumbers using the cancellation-free branch of S +- T.
template <class T>
void wavenumbers_sq(T l1, T l2, double kappa, T& r1sq, T& r2sq) {
    T d = 1.0 - kappa * l2;
    T tt = 0.5 * (kappa * l1 + l2) / d;
    T b = l1 / d;
    T s = std::sqrt(b + tt * tt);
    if (real_part(tt) >= 0.0) {
        r1sq = s + tt;
        r2sq = b / (s + tt);
    } else {
        r2sq = s - tt;
        r1sq = b / (s - tt);
    }
}

template <class T>
T residual_t(T l1, T l2, double kappa) {
    T r1sq, r2sq;
    wavenumbers_sq(l1, l2, kappa, r1sq, r2sq);
    T r1 = std::sqrt(r1sq), r2 = std::sqrt(r2sq);
    T s = r1 * r2;  // sqrt(lambda1/d)
    T kl1 = kappa * l1;
    return 2.0 * l1 + kl1 * (kl1 - l2) + (2.0 * l1 + l2 * l2 - kl1 * l2) * std::cos(r1) * std::cosh(r2) -
           s * (l2 - kappa * (l1 - kl1 * l2 + l2 * l2)) * std::sin(r1) * std::sinh(r2);
}

double g_d1(const LoadPoint& p, double kappa) {
    return residual_t(cplx(p.lambda1, cs_step), cplx(p.lambda2, 0.0), kappa).imag() / cs_step;
}

double g_d2(const LoadPoint& p, double kappa) {
    return residual_t(cplx(p.lambda1, 0.0), cplx(p.lambda2, cs_step), kappa).imag() / cs_step;
}

double refine_bracket(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    double x = 0.5 * (r.first + r.second);
    double fx = f(x);
    double f1 = f(r.first), f2 = f(r.second);
    if (std::abs(f1) < std::abs(fx)) {
        x = r.first;
        fx = f1;
    }
    if (std::abs(f2) < std::abs(fx))
        x = r.second;
    return x;
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int panels,
                               std::size_t max_roots) {
    std::vector<double> roots;
    if (!(hi > lo))
        return roots;
    double x0 = lo, f0 = f(lo);
    if (f0 == 0.0)
        roots.push_back(lo);
    for (int i = 1; i <= panels && roots.size() < max_roots; ++i) {
        double x1 = lo + (hi - lo) * i / panels;
        double f1 = f(x1);
        if (f1 == 0.0) {
            roots.push_back(x1);
        } else if (f0 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            // Sign changes that do not refine to a residual zero are unresolved
            // oscillation next to the singular line, not roots.
            double r = refine_bracket(f, x0, x1, f0, f1);
            if (std::abs(f(r)) < 1e-8)
                roots.push_back(r);
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

Interval default_lambda2_bracket(double kappa) { return {0.0, lambda2_limit(kappa)}; }

void check_lambda2_bracket(const Interval& b, double kappa) {
    if (!(b.hi > b.lo))
        throw InvalidInput("empty bracket");
    if (kappa > 0.0 && b.hi > lambda2_limit(kappa))
        throw DomainError("bracket reaches the singular line lambda2 = 1/kappa");
}

// Newton in lambda2 at fixed lambda1.
std::optional<double> newton_lambda2(double l1, double l2, double kappa) {
    double lim = lambda2_limit(kappa);
    for (int it = 0; it < 40; ++it) {
        if (!(l2 < lim))
            return std::nullopt;
        LoadPoint p{l1, l2};
        double g = char_residual(p, kappa);
        double d = g_d2(p, kappa);
        if (d == 0.0 || !std::isfinite(d))
            return std::nullopt;
        double dx = -g / d;
        l2 += dx;
        if (std::abs(dx) < 1e-14 * std::max(1.0, std::abs(l2)))
            return l2;
    }
    return std::nullopt;
}

bool admissible(const detail::Vec2& x, double kappa) { return x[0] > 0.0 && kappa * x[1] < 1.0 - 1e-9; }

LoadPoint fold_newton(double kappa, const LoadPoint& guess) {
    auto F = [kappa](const detail::Vec2& x) {
        LoadPoint p{x[0], x[1]};
        return detail::Vec2{char_residual(p, kappa), g_d2(p, kappa)};
    };
    detail::Newton2Options opt;
    opt.max_step = 1.0;
    auto x = detail::newton2(F, {guess.lambda1, guess.lambda2}, opt,
                             [kappa](const detail::Vec2& v) { return admissible(v, kappa); }, "fold search");
    return {x[0], x[1]};
}

}  // namespace

std::string to_string(BranchTag tag) {
    switch (tag) {
        case BranchTag::lower: return "lower";
        case BranchTag::upper: return "upper";
        default: return "single";
    }
}

double lambda2_limit(double kappa) { return kappa > 0.0 ? (1.0 - 1e-9) / kappa : 100.0; }

Wavenumbers wavenumbers(const LoadPoint& p, double kappa) {
    check_admissible(p, kappa);
    double r1sq, r2sq;
    wavenumbers_sq(p.lambda1, p.lambda2, kappa, r1sq, r2sq);
    return {std::sqrt(std::max(0.0, r1sq)), std::sqrt(std::max(0.0, r2sq))};
}

double char_residual(const LoadPoint& p, double kappa) {
    check_admissible(p, kappa);
    return residual_t(p.lambda1, p.lambda2, kappa);
}

double char_f(const LoadPoint& p, double kappa) {
    check_admissible(p, kappa);
    return std::sqrt(p.lambda1 / (1.0 - kappa * p.lambda2)) * residual_t(p.lambda1, p.lambda2, kappa);
}

Partials char_partials(const LoadPoint& p, double kappa, double h) {
    double h1 = h > 0.0 ? h : 1e-6 * std::max(1.0, std::abs(p.lambda1));
    double h2 = h > 0.0 ? h : 1e-6 * std::max(1.0, std::abs(p.lambda2));
    if (p.lambda1 - h1 < 0.0 || !(1.0 - kappa * (p.lambda2 + h2) > 0.0))
        throw DomainError("difference stencil leaves the admissible region");
    Partials d;
    d.d1 = (char_residual({p.lambda1 + h1, p.lambda2}, kappa) - char_residual({p.lambda1 - h1, p.lambda2}, kappa)) /
           (2.0 * h1);
    d.d2 = (char_residual({p.lambda1, p.lambda2 + h2}, kappa) - char_residual({p.lambda1, p.lambda2 - h2}, kappa)) /
           (2.0 * h2);
    return d;
}

Partials char_gradient(const LoadPoint& p, double kappa) {
    check_admissible(p, kappa);
    return {g_d1(p, kappa), g_d2(p, kappa)};
}

double eta_prime(const LoadPoint& p0, double kappa) {
    auto g = char_gradient(p0, kappa);
    double norm = std::hypot(g.d1, g.d2);
    if (!(std::abs(g.d2) > 1e-6 * norm))
        throw DegeneratePoint("vanishing d/dlambda2 of the characteristic residual (fold point)");
    return -g.d1 / g.d2;
}

std::vector<double> lambda2_roots(double lambda1, double kappa, std::optional<Interval> bracket, int panels) {
    Interval b = bracket.value_or(default_lambda2_bracket(kappa));
    check_lambda2_bracket(b, kappa);
    check_admissible({lambda1, b.lo}, kappa);
    auto f = [lambda1, kappa](double l2) { return residual_t(lambda1, l2, kappa); };
    return scan_roots(f, b.lo, b.hi, panels, std::numeric_limits<std::size_t>::max());
}

double solve_lambda2(double lambda1, double kappa, std::optional<Interval> bracket, int which) {
    if (which < 1)
        throw InvalidInput("root index starts at 1");
    Interval b = bracket.value_or(default_lambda2_bracket(kappa));
    check_lambda2_bracket(b, kappa);
    check_admissible({lambda1, b.lo}, kappa);
    auto f = [lambda1, kappa](double l2) { return residual_t(lambda1, l2, kappa); };
    auto roots = scan_roots(f, b.lo, b.hi, 2000, static_cast<std::size_t>(which));
    if (static_cast<int>(roots.size()) < which)
        throw RootNotFound("no sign change number " + std::to_string(which) + " in lambda2 at lambda1 = " +
                           std::to_string(lambda1));
    return roots[which - 1];
}

double solve_lambda1(double lambda2, double kappa, std::optional<Interval> bracket, int which) {
    if (which < 1)
        throw InvalidInput("root index starts at 1");
    Interval b = bracket.value_or(Interval{1e-6, 200.0});
    if (!(b.hi > b.lo))
        throw InvalidInput("empty bracket");
    if (b.lo < 0.0)
        throw DomainError("lambda1 must be nonnegative");
    check_admissible({b.lo, lambda2}, kappa);
    auto f = [lambda2, kappa](double l1) { return residual_t(l1, lambda2, kappa); };
    auto roots = scan_roots(f, b.lo, b.hi, 2000, static_cast<std::size_t>(which));
    if (static_cast<int>(roots.size()) < which)
        throw RootNotFound("no sign change number " + std::to_string(which) + " in lambda1 at lambda2 = " +
                           std::to_string(lambda2));
    return roots[which - 1];
}

FirstModeTrack track_first_mode(double kappa, double lambda1_max) {
    FirstModeTrack tr;
    double l1 = 0.05;
    auto roots = lambda2_roots(l1, kappa, Interval{0.0, lambda2_limit(kappa)});
    if (roots.empty()) {
        tr.end = FirstModeTrack::End::exited;
        return tr;
    }
    double l2 = roots.front();
    tr.points.push_back({l1, l2});
    double step = 0.05;
    double g2_sign = g_d2({l1, l2}, kappa) < 0.0 ? -1.0 : 1.0;

    while (l1 < lambda1_max) {
        auto grad = char_gradient({l1, l2}, kappa);
        double slope = -grad.d1 / grad.d2;
        double h = std::min({step, lambda1_max - l1, 0.02 / std::max(std::abs(slope), 1e-12)});
        bool moved = false;
        while (h > 1e-10) {
            auto c = newton_lambda2(l1 + h, l2 + slope * h, kappa);
            if (c && g_d2({l1 + h, *c}, kappa) * g2_sign > 0.0 && std::abs(*c - l2) < 0.1) {
                l1 += h;
                l2 = *c;
                moved = true;
                break;
            }
            h *= 0.5;
        }
        if (!moved || std::abs(slope) > 1e5) {
            tr.end = FirstModeTrack::End::folded;
            tr.fold = fold_newton(kappa, {l1, l2});
            return tr;
        }
        if (l2 < -1e-9) {
            tr.end = FirstModeTrack::End::exited;
            return tr;
        }
        tr.points.push_back({l1, l2});
    }
    tr.end = FirstModeTrack::End::limit;
    return tr;
}

LoadPoint find_fold(double kappa, const LoadPoint& guess) {
    LoadPoint f;
    try {
        f = fold_newton(kappa, guess);
    } catch (const NoConvergence& e) {
        throw NoFold(std::string("fold search diverged: ") + e.what());
    }
    auto tr = track_first_mode(kappa, f.lambda1 + 1.0);
    if (tr.end != FirstModeTrack::End::folded)
        throw NoFold("first-mode curve leaves lambda2 >= 0 without folding at kappa = " + std::to_string(kappa));
    if (std::abs(tr.fold->lambda1 - f.lambda1) > 1e-6 || std::abs(tr.fold->lambda2 - f.lambda2) > 1e-6)
        throw NoFold("Newton converged to a fold off the first-mode curve");
    return f;
}

LoadPoint find_fold(double kappa) {
    auto tr = track_first_mode(kappa);
    if (tr.end != FirstModeTrack::End::folded)
        throw NoFold("first-mode curve has no fold in lambda2 >= 0 at kappa = " + std::to_string(kappa));
    return *tr.fold;
}

LoadPoint find_branch_minimum(double kappa, const LoadPoint& guess) {
    auto F = [kappa](const detail::Vec2& x) {
        LoadPoint p{x[0], x[1]};
        return detail::Vec2{char_residual(p, kappa), g_d1(p, kappa)};
    };
    detail::Newton2Options opt;
    opt.max_step = 1.0;
    detail::Vec2 x;
    try {
        x = detail::newton2(F, {guess.lambda1, guess.lambda2}, opt,
                            [kappa](const detail::Vec2& v) { return admissible(v, kappa); }, "minimum search");
    } catch (const NoConvergence& e) {
        throw NotFound(std::string("branch minimum: ") + e.what());
    }
    LoadPoint m{x[0], x[1]};
    if (m.lambda2 < -1e-9)
        throw NotFound("stationary point lies below lambda2 = 0");

    // Must sit on the first-mode lower branch and be a minimum along it.
    auto tr = track_first_mode(kappa, m.lambda1 + 0.05);
    if (tr.points.empty() || tr.points.back().lambda1 < m.lambda1)
        throw NotFound("stationary point is not reached by the first-mode curve");
    auto it = std::min_element(tr.points.begin(), tr.points.end(), [&](const LoadPoint& a, const LoadPoint& b) {
        return std::abs(a.lambda1 - m.lambda1) < std::abs(b.lambda1 - m.lambda1);
    });
    auto r = newton_lambda2(m.lambda1, it->lambda2, kappa);
    if (!r || std::abs(*r - m.lambda2) > 1e-6)
        throw NotFound("stationary point is not on the first-mode curve");
    double dl = 0.01;
    auto below = newton_lambda2(m.lambda1 - dl, m.lambda2, kappa);
    auto above = newton_lambda2(m.lambda1 + dl, m.lambda2, kappa);
    if (!below || !above || *below < m.lambda2 || *above < m.lambda2)
        throw NotFound("stationary point is not a minimum of lambda2 along the curve");
    return m;
}

LoadPoint find_branch_minimum(double kappa) {
    auto tr = track_first_mode(kappa);
    for (std::size_t i = 1; i + 1 < tr.points.size(); ++i) {
        if (tr.points[i].lambda2 <= tr.points[i - 1].lambda2 && tr.points[i].lambda2 <= tr.points[i + 1].lambda2)
            return find_branch_minimum(kappa, tr.points[i]);
    }
    throw NotFound("first-mode curve has no minimum in lambda2 >= 0 at kappa = " + std::to_string(kappa));
}

KappaCritical find_kappa_cr(double guess_kappa, double guess_lambda1) {
    auto F = [](const detail::Vec2& x) {
        LoadPoint p{x[1], 0.0};
        return detail::Vec2{residual_t(p.lambda1, 0.0, x[0]), g_d1(p, x[0])};
    };
    detail::Newton2Options opt;
    opt.max_step = 1.0;
    try {
        auto x = detail::newton2(F, {guess_kappa, guess_lambda1}, opt,
                                 [](const detail::Vec2& v) { return v[0] > 0.0 && v[1] > 0.0; }, "kappa_cr search");
        return {x[0], x[1]};
    } catch (const NoConvergence& e) {
        throw NotFound(std::string("critical non-locality: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Curve tracing

namespace {

struct Track {
    std::vector<std::size_t> cols;
    std::vector<double> l2;
    int sheet = -1;
};

struct FoldEvent {
    int a, b;
    LoadPoint where;
};

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i)
        i = parent[i] = parent[parent[i]];
    return i;
}

// Order-preserving alignment of two sorted root lists. Returns for each entry
// of `a` the matched index in `b` or -1.
std::vector<int> align(const std::vector<double>& a, const std::vector<double>& b, double gap) {
    std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 1; i <= n; ++i)
        cost[i][0] = gap * i;
    for (std::size_t k = 1; k <= m; ++k)
        cost[0][k] = gap * k;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 1; k <= m; ++k)
            cost[i][k] = std::min({cost[i - 1][k - 1] + std::abs(a[i - 1] - b[k - 1]), cost[i - 1][k] + gap,
                                   cost[i][k - 1] + gap});
    std::vector<int> match(n, -1);
    std::size_t i = n, k = m;
    while (i > 0 && k > 0) {
        if (cost[i][k] == cost[i - 1][k - 1] + std::abs(a[i - 1] - b[k - 1])) {
            match[i - 1] = static_cast<int>(k - 1);
            --i;
            --k;
        } else if (cost[i][k] == cost[i - 1][k] + gap) {
            --i;
        } else {
            --k;
        }
    }
    return match;
}

}  // namespace

std::vector<BranchCurve> trace_curve(double kappa, const std::vector<double>& lambda1_grid, int mode_index,
                                     const TraceOptions& opt) {
    if (mode_index < 1)
        throw InvalidInput("mode index starts at 1");
    std::vector<BranchCurve> out;
    Interval b{opt.lambda2_lo, opt.lambda2_hi.value_or(lambda2_limit(kappa))};
    std::vector<double> grid;
    for (double l1 : lambda1_grid)
        if (l1 > 0.0)
            grid.push_back(l1);
    if (grid.empty() || !(b.hi > b.lo))
        return out;
    check_lambda2_bracket(b, kappa);

    const std::size_t cap = static_cast<std::size_t>(2 * mode_index + 6);
    std::vector<std::vector<double>> cols(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        auto f = [l1 = grid[j], kappa](double l2) { return residual_t(l1, l2, kappa); };
        cols[j] = scan_roots(f, b.lo, b.hi, opt.panels, cap);
    }

    std::vector<Track> tracks;
    std::vector<FoldEvent> folds;
    std::vector<int> live(cols[0].size());
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
        tracks.push_back({{0}, {cols[0][i]}});
        live[i] = static_cast<int>(i);
    }
    const double gap = 0.15;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        const auto& A = cols[j];
        const auto& B = cols[j + 1];
        // Match against a tangent predictor so wide lambda1 steps still pair up.
        std::vector<double> pred(A);
        for (std::size_t i = 0; i < A.size(); ++i) {
            try {
                double s = eta_prime({grid[j], A[i]}, kappa);
                double shift = s * (grid[j + 1] - grid[j]);
                if (std::isfinite(shift) && std::abs(shift) < 2.0)
                    pred[i] += shift;
            } catch (const Error&) {
            }
        }
        if (!std::is_sorted(pred.begin(), pred.end()))
            pred = A;
        auto match = align(pred, B, gap);
        std::vector<int> next(B.size(), -1);
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (match[i] >= 0) {
                auto& t = tracks[live[i]];
                t.cols.push_back(j + 1);
                t.l2.push_back(B[match[i]]);
                next[match[i]] = live[i];
            }
        }
        // Adjacent pairs vanishing together: fold between the columns.
        for (std::size_t i = 0; i + 1 < A.size(); ++i) {
            if (match[i] == -1 && match[i + 1] == -1 && !(A.size() >= cap && i + 2 >= A.size())) {
                LoadPoint seed{grid[j], 0.5 * (A[i] + A[i + 1])};
                LoadPoint where = seed;
                try {
                    where = fold_newton(kappa, seed);
                } catch (const Error&) {
                }
                folds.push_back({live[i], live[i + 1], where});
                match[i + 1] = -2;  // consumed
            }
        }
        std::vector<bool> born(B.size(), false);
        for (std::size_t k = 0; k < B.size(); ++k) {
            if (next[k] < 0) {
                tracks.push_back({{j + 1}, {B[k]}});
                next[k] = static_cast<int>(tracks.size() - 1);
                born[k] = true;
            }
        }
        for (std::size_t k = 0; k + 1 < B.size(); ++k) {
            if (born[k] && born[k + 1] && !(B.size() >= cap && k + 2 >= B.size())) {
                LoadPoint seed{grid[j + 1], 0.5 * (B[k] + B[k + 1])};
                LoadPoint where = seed;
                try {
                    where = fold_newton(kappa, seed);
                } catch (const Error&) {
                }
                folds.push_back({next[k], next[k + 1], where});
                born[k + 1] = false;
            }
        }
        live = next;
    }

    // Sheets: tracks joined through folds.
    std::vector<int> parent(tracks.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& f : folds)
        parent[find_root(parent, f.a)] = find_root(parent, f.b);

    struct SheetKey {
        std::size_t first_col;
        double low;
        int root;
    };
    std::vector<SheetKey> keys;
    for (std::size_t t = 0; t < tracks.size(); ++t) {
        int r = find_root(parent, static_cast<int>(t));
        auto it = std::find_if(keys.begin(), keys.end(), [r](const SheetKey& k) { return k.root == r; });
        std::size_t c0 = tracks[t].cols.front();
        double low = tracks[t].l2.front();
        if (it == keys.end()) {
            keys.push_back({c0, low, r});
        } else if (c0 < it->first_col || (c0 == it->first_col && low < it->low)) {
            it->first_col = c0;
            it->low = low;
        }
    }
    std::sort(keys.begin(), keys.end(), [](const SheetKey& a, const SheetKey& b) {
        return a.first_col != b.first_col ? a.first_col < b.first_col : a.low < b.low;
    });
    if (static_cast<std::size_t>(mode_index) > keys.size())
        return out;
    int sheet = keys[mode_index - 1].root;

    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < tracks.size(); ++t)
        if (find_root(parent, static_cast<int>(t)) == sheet)
            members.push_back(t);

    std::optional<LoadPoint> fold;
    for (const auto& f : folds)
        if (find_root(parent, f.a) == sheet) {
            fold = f.where;
            break;
        }

    std::size_t lowest = members.front();
    auto min_l2 = [&](std::size_t t) { return *std::min_element(tracks[t].l2.begin(), tracks[t].l2.end()); };
    for (auto t : members)
        if (min_l2(t) < min_l2(lowest))
            lowest = t;

    for (auto t : members) {
        BranchCurve bc;
        bc.kappa = kappa;
        bc.mode_index = mode_index;
        bc.fold = fold;
        bc.branch_tag = members.size() == 1 ? BranchTag::single : (t == lowest ? BranchTag::lower : BranchTag::upper);
        for (std::size_t k = 0; k < tracks[t].cols.size(); ++k) {
            LoadPoint p{grid[tracks[t].cols[k]], tracks[t].l2[k]};
            double eta = std::numeric_limits<double>::quiet_NaN();
            try {
                eta = eta_prime(p, kappa);
            } catch (const DegeneratePoint&) {
            }
            bc.points.push_back({p, eta});
        }
        out.push_back(std::move(bc));
    }
    std::sort(out.begin(), out.end(), [](const BranchCurve& a, const BranchCurve& b) {
        return static_cast<int>(a.branch_tag) < static_cast<int>(b.branch_tag);
    });
    return out;
}

}  // namespace nlrod
