#include "nlrod/verification.hpp"

#include "nlrod/bvp_solver.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"
#include "nlrod/lin_modes.hpp"
#include "nlrod/ls_reduction.hpp"
#include "nlrod/unfolding.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace nlrod {

bool AcceptanceReport::all_passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::vector<ReferencePoint> kappa025_points() {
    std::vector<ReferencePoint> pts;
    for (auto [l1, l2] : std::vector<std::pair<double, double>>{{0.05, 1.52248},
                                                                 {2.5, 1.33903},
                                                                 {5, 1.13541},
                                                                 {7.5, 0.916144},
                                                                 {10, 0.682732},
                                                                 {12.5, 0.436978},
                                                                 {15, 0.180736}})
        pts.push_back({0.25, {l1, l2}, 1, 0.0, "kappa0.25", ""});
    pts.push_back({0.25, {16.7131, 0.0}, 1, -0.05, "kappa0.25", ""});
    return pts;
}

std::vector<ReferencePoint> kappa045_points() {
    std::vector<ReferencePoint> pts;
    for (auto [l1, l2] : std::vector<std::pair<double, double>>{
             {0.05, 1.16776}, {2.5, 1.10261}, {5, 1.05447}, {6, 1.04544}, {7, 1.04881}, {7.5, 1.05978}, {8, 1.08694}})
        pts.push_back({0.45, {l1, l2}, 1, 0.0, "lower", ""});
    for (auto [l1, l2] : std::vector<std::pair<double, double>>{
             {8, 1.25843}, {7.5, 1.33932}, {6, 1.51419}, {5, 1.61161}, {2.5, 1.82714}, {0.05, 2.01637}})
        pts.push_back({0.45, {l1, l2}, 2, 0.0, "upper", ""});
    return pts;
}

std::vector<ReferencePoint> classification_points() {
    std::vector<ReferencePoint> pts{{0.25, {10, 0.682732}, 1, 0.0, "kappa0.25", "Supercritical"}};
    for (auto [l1, l2] : std::vector<std::pair<double, double>>{
             {0.05, 1.16776}, {2.5, 1.10261}, {5, 1.05447}, {7, 1.04881}, {7.5, 1.05978}})
        pts.push_back({0.45, {l1, l2}, 1, 0.0, "lower", "Supercritical"});
    pts.push_back({0.45, {0.05, 2.01637}, 2, 0.0, "upper", "Subcritical"});
    pts.push_back({0.45, {2.5, 1.82714}, 2, 0.0, "upper", "Subcritical"});
    return pts;
}

namespace {

// Critical point on the computed curve closest to the reference pair.
LoadPoint refine(const ReferencePoint& r) {
    Interval br{r.lambda2_lo, lambda2_limit(r.kappa)};
    return {r.p.lambda1, solve_lambda2(r.p.lambda1, r.kappa, br, r.which)};
}

std::string pt(const LoadPoint& p) { return fmt::format("({:.6g}, {:.6g})", p.lambda1, p.lambda2); }

struct Check {
    bool ok = true;
    std::vector<std::string> failures;
    std::string summary;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
    CriterionResult result(int id, const std::string& name) const {
        std::string detail = summary;
        for (std::size_t i = 0; i < failures.size() && i < 4; ++i)
            detail += (detail.empty() ? "" : "; ") + failures[i];
        if (failures.size() > 4)
            detail += fmt::format("; {} more", failures.size() - 4);
        return {id, name, ok, detail};
    }
};

CriterionResult kappa_critical(std::size_t) {
    Check c;
    auto k = find_kappa_cr();
    c.summary = fmt::format("kappa_cr = {:.8g}, lambda1 = {:.8g}", k.kappa, k.lambda1);
    c.require(std::abs(k.kappa - 0.375325) <= 5e-4, "kappa_cr off");
    c.require(std::abs(k.lambda1 - 29.145) <= 5e-3, "lambda1 off");
    return c.result(1, "kappa_cr reproduction");
}

CriterionResult fold(std::size_t) {
    Check c;
    auto f = find_fold(0.45, {8.3, 1.16});
    c.summary = "fold " + pt(f);
    c.require(std::abs(f.lambda1 - 8.29796) <= 1e-3 && std::abs(f.lambda2 - 1.15665) <= 1e-3, "fold off");
    return c.result(2, "fold reproduction");
}

CriterionResult branch_minimum(std::size_t) {
    Check c;
    auto m = find_branch_minimum(0.45, {6.3, 1.05});
    c.summary = "minimum " + pt(m);
    c.require(std::abs(m.lambda1 - 6.32271) <= 1e-3 && std::abs(m.lambda2 - 1.04474) <= 1e-3, "minimum off");
    return c.result(3, "branch-minimum reproduction");
}

CriterionResult curve_points(std::size_t) {
    Check c;
    auto pts = kappa025_points();
    auto more = kappa045_points();
    pts.insert(pts.end(), more.begin(), more.end());
    double worst = 0.0;
    for (const auto& r : pts) {
        try {
            double l2 = refine(r).lambda2;
            double err = std::abs(l2 - r.p.lambda2);
            worst = std::max(worst, err);
            c.require(err <= 1e-3, fmt::format("kappa {} {} -> {:.6g}", r.kappa, pt(r.p), l2));
        } catch (const std::exception& e) {
            c.require(false, fmt::format("kappa {} {}: {}", r.kappa, pt(r.p), e.what()));
        }
    }
    auto f = find_fold(0.45, {8.3, 1.16});
    double ferr = std::abs(f.lambda2 - 1.15665);
    worst = std::max(worst, ferr);
    c.require(ferr <= 1e-3, "fold pair " + pt(f));
    c.summary = fmt::format("{} pairs, max |dlambda2| = {:.3g}", pts.size() + 1, worst);
    return c.result(4, "curve-point regression");
}

// Zero of the shooting determinant near a characteristic root.
double determinant_root(double lambda1, double kappa, double near, std::size_t grid) {
    auto det = [&](double l2) { return linear_shooting_determinant({lambda1, l2}, kappa, grid); };
    for (double w = 1e-4; w <= 1e-1; w *= 4.0) {
        double lo = std::max(near - w, -1.0), hi = std::min(near + w, lambda2_limit(kappa));
        double flo = det(lo), fhi = det(hi);
        if (flo * fhi > 0.0)
            continue;
        std::uintmax_t it = 100;
        auto r = boost::math::tools::toms748_solve(det, lo, hi, flo, fhi,
                                                   boost::math::tools::eps_tolerance<double>(48), it);
        return 0.5 * (r.first + r.second);
    }
    throw RootNotFound(fmt::format("no determinant sign change near lambda2 = {}", near));
}

CriterionResult oracle_equivalence(std::size_t grid) {
    Check c;
    std::mt19937 rng(20240611u);
    std::uniform_real_distribution<double> u1(0.5, 15.0), uk(0.0, 0.5);
    int done = 0, draws = 0;
    double worst = 0.0;
    while (done < 10 && draws < 100) {
        ++draws;
        double l1 = u1(rng), k = uk(rng);
        double r;
        try {
            r = solve_lambda2(l1, k);
        } catch (const ConvergenceError&) {
            continue;
        }
        double s = determinant_root(l1, k, r, grid);
        worst = std::max(worst, std::abs(s - r));
        c.require(std::abs(s - r) <= 1e-6, fmt::format("(lambda1 {:.6g}, kappa {:.6g}): {:.10g} vs {:.10g}", l1, k, r, s));
        ++done;
    }
    c.require(done == 10, fmt::format("only {} samples with a root", done));
    c.summary = fmt::format("{} samples, max |dlambda2| = {:.3g}", done, worst);
    return c.result(5, "oracle equivalence");
}

CriterionResult classical_limit(std::size_t) {
    Check c;
    double r = solve_lambda2(1e-8, 0.0);
    double ref = std::numbers::pi * std::numbers::pi / 4.0;
    c.summary = fmt::format("lambda2 = {:.10g}, pi^2/4 = {:.10g}", r, ref);
    c.require(std::abs(r - ref) <= 1e-3, "classical limit off");
    return c.result(6, "classical limit");
}

struct Classified {
    ReferencePoint ref;
    LoadPoint p0;
    ModeShape y;
    AdjointKernel q2, q4;
    ReductionCoefficients rc2, rc4;
};

Classified classify(const ReferencePoint& r, std::size_t grid) {
    Classified k{r, refine(r), {}, {}, {}, {}, {}};
    k.y = mode_shape(k.p0, r.kappa, grid);
    k.q2 = adjoint_kernel(2, k.p0, r.kappa, grid);
    k.q4 = adjoint_kernel(4, k.p0, r.kappa, grid);
    k.rc2 = reduction_coefficients(k.p0, r.kappa, k.y, k.q2, grid);
    k.rc4 = reduction_coefficients(k.p0, r.kappa, k.y, k.q4, grid);
    return k;
}

CriterionResult classification(std::size_t grid) {
    Check c;
    int n = 0;
    for (const auto& r : classification_points()) {
        auto k = classify(r, grid);
        std::string v2 = to_string(k.rc2.verdict), v4 = to_string(k.rc4.verdict);
        c.require(v2 == r.expected_verdict, fmt::format("kappa {} {}: {} (expected {})", r.kappa, pt(k.p0), v2,
                                                        r.expected_verdict));
        c.require(v2 == v4, fmt::format("kappa {} {}: q2 {} vs q4 {}", r.kappa, pt(k.p0), v2, v4));
        ++n;
    }
    c.summary = fmt::format("{} points", n);
    return c.result(7, "classification regression");
}

CriterionResult mode_residuals(std::size_t grid) {
    Check c;
    auto pts = kappa025_points();
    auto more = kappa045_points();
    pts.insert(pts.end(), more.begin(), more.end());
    std::vector<std::pair<double, LoadPoint>> loads;
    for (const auto& r : pts)
        loads.push_back({r.kappa, refine(r)});
    loads.push_back({0.45, find_fold(0.45, {8.3, 1.16})});
    double wi = 0.0, wb = 0.0;
    auto note = [&](const LinearResidual& res, const std::string& what) {
        wi = std::max(wi, res.interior);
        wb = std::max(wb, res.boundary_max());
        c.require(res.interior < 1e-6 && res.boundary_max() < 1e-8,
                  fmt::format("{}: interior {:.3g}, boundary {:.3g}", what, res.interior, res.boundary_max()));
    };
    for (const auto& [k, p] : loads) {
        auto y = mode_shape(p, k, grid);
        note(linear_residual_L4(y, p, k, grid), fmt::format("y_L at kappa {} {}", k, pt(p)));
        for (int order : {2, 4})
            note(adjoint_residual(adjoint_kernel(order, p, k, grid), grid),
                 fmt::format("q{} at kappa {} {}", order, k, pt(p)));
    }
    c.summary = fmt::format("{} points, max interior {:.3g}, max boundary {:.3g}", loads.size(), wi, wb);
    return c.result(8, "mode residuals");
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + 1e-14; }

CriterionResult robustness(std::size_t grid) {
    Check c;
    double worst = 0.0;
    auto cmp = [&](double a, double b, const std::string& what) {
        double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0)
            worst = std::max(worst, std::abs(a - b) / scale);
        c.require(close_rel(a, b, 1e-6), fmt::format("{}: {:.10g} vs {:.10g}", what, a, b));
    };
    for (const auto& r : classification_points()) {
        auto coarse = classify(r, grid);
        auto fine = classify(r, 2 * grid);
        std::string at = fmt::format("kappa {} {}", r.kappa, pt(coarse.p0));
        cmp(coarse.rc2.c11, fine.rc2.c11, at + " c11");
        cmp(coarse.rc2.c12, fine.rc2.c12, at + " c12");
        cmp(coarse.rc2.c13, fine.rc2.c13, at + " c13");
        cmp(coarse.rc2.c3, fine.rc2.c3, at + " c3");
        auto uc = unfolding_coefficients(coarse.p0, r.kappa, coarse.y, coarse.q2, fixture_curvature, grid);
        auto uf = unfolding_coefficients(fine.p0, r.kappa, fine.y, fine.q2, fixture_curvature, 2 * grid);
        auto tc = uc.table(), tf = uf.table();
        for (std::size_t i = 0; i < tc.size(); ++i)
            cmp(tc[i].second, tf[i].second, at + " " + tc[i].first);

        AdjointKernel flipped = coarse.q2;
        flipped.C = -flipped.C;
        auto rf = reduction_coefficients(coarse.p0, r.kappa, coarse.y, flipped, grid);
        c.require(rf.verdict == coarse.rc2.verdict, at + ": gauge flip changes the verdict");
        TrigHyp scaled = coarse.y;
        scaled.C *= 2.0;
        auto rs = reduction_coefficients(coarse.p0, r.kappa, scaled, coarse.q2, grid);
        c.require(rs.verdict == coarse.rc2.verdict, at + ": mode scaling changes the verdict");
    }
    c.summary = fmt::format("max relative change under grid doubling {:.3g}", worst);
    return c.result(9, "reduction robustness");
}

CriterionResult unfolding(std::size_t grid) {
    Check c;
    double smallest = INFINITY;
    for (const auto& r : classification_points()) {
        auto k = classify(r, grid);
        auto uc = unfolding_coefficients(k.p0, r.kappa, k.y, k.q2, fixture_curvature, grid);
        auto dec = is_universal_unfolding(k.rc2, uc);
        smallest = std::min(smallest, std::abs(unfolding_determinant(uc)));
        c.require(dec.universal, fmt::format("kappa {} {}: not universal ({})", r.kappa, pt(k.p0), dec.reason));
    }
    c.summary = fmt::format("min |determinant| = {:.4g}", smallest);
    return c.result(10, "unfolding regression");
}

struct PostbuckleCase {
    LoadPoint p0;
    double kappa;
    double delta;
    Direction dir;
};

std::vector<PostbuckleCase> morphology_family_025() {
    std::vector<PostbuckleCase> cases;
    for (const auto& r : kappa025_points())
        cases.push_back({refine(r), 0.25, 0.5, Direction::along_lambda1});
    return cases;
}

std::vector<PostbuckleCase> morphology_family_045() {
    std::vector<PostbuckleCase> cases;
    for (const auto& r : classification_points())
        if (r.kappa == 0.45 && r.label == "lower")
            cases.push_back({refine(r), 0.45, 0.02, Direction::fixed_lambda1});
    return cases;
}

std::vector<PostbuckleCase> scaling_family() {
    std::vector<PostbuckleCase> cases;
    LoadPoint p0{10.0, solve_lambda2(10.0, 0.25)};
    for (double d : {0.1, 0.2, 0.3, 0.4, 0.5})
        cases.push_back({p0, 0.25, d, Direction::fixed_lambda2});
    return cases;
}

BvpSolution solve(const PostbuckleCase& pc, int sign, std::size_t grid) {
    ShootOptions opt;
    opt.n_steps = grid;
    return solve_postbuckling(pc.p0, pc.kappa, pc.delta, pc.dir, sign, opt);
}

CriterionResult morphology(std::size_t grid) {
    Check c;
    double worst = 0.0;
    std::string nodes025, nodes045;
    for (const auto& pc : morphology_family_025()) {
        auto s = solve(pc, +1, grid);
        int n = node_count(s);
        double m2 = residual_M2(s);
        worst = std::max(worst, m2);
        nodes025 += std::to_string(n);
        c.require(n == 0, fmt::format("kappa 0.25 {}: {} nodes", pt(pc.p0), n));
        c.require(m2 < 1e-4, fmt::format("kappa 0.25 {}: M2 residual {:.3g}", pt(pc.p0), m2));
    }
    auto minimum = find_branch_minimum(0.45, {6.3, 1.05});
    std::vector<int> below, above;
    for (const auto& pc : morphology_family_045()) {
        auto s = solve(pc, +1, grid);
        int n = node_count(s);
        double m2 = residual_M2(s);
        worst = std::max(worst, m2);
        nodes045 += std::to_string(n);
        (pc.p0.lambda1 < minimum.lambda1 ? below : above).push_back(n);
        c.require(m2 < 1e-4, fmt::format("kappa 0.45 {}: M2 residual {:.3g}", pt(pc.p0), m2));
    }
    bool pattern = !below.empty() && !above.empty() &&
                   std::all_of(below.begin(), below.end(), [](int n) { return n == 0; }) &&
                   std::all_of(above.begin(), above.end(), [](int n) { return n == 1; });
    c.require(pattern, "kappa 0.45 node counts " + nodes045 + " do not switch 0 -> 1 across the minimum");
    c.summary = fmt::format("nodes kappa 0.25: {}, kappa 0.45: {}, max M2 {:.3g}", nodes025, nodes045, worst);
    return c.result(11, "post-buckling morphology");
}

CriterionResult scaling(std::size_t grid) {
    Check c;
    std::vector<double> ratio;
    for (const auto& pc : scaling_family()) {
        auto s = solve(pc, +1, grid);
        ratio.push_back(std::abs(tip_deflection(s)) / std::sqrt(pc.delta));
    }
    auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    double spread = *hi / *lo - 1.0;
    c.summary = fmt::format("tip/sqrt(dl1) in [{:.6g}, {:.6g}], spread {:.3g}", *lo, *hi, spread);
    c.require(spread <= 0.15, "spread above 15%");
    return c.result(12, "pitchfork scaling");
}

CriterionResult invariants(std::size_t grid) {
    Check c;
    auto cases = morphology_family_025();
    for (auto& v : {morphology_family_045(), scaling_family()})
        cases.insert(cases.end(), v.begin(), v.end());
    double stretch = 0.0, mirror = 0.0;
    for (const auto& pc : cases) {
        auto a = solve(pc, +1, grid);
        auto b = solve(pc, -1, grid);
        for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
            double t = static_cast<double>(i) / (a.trajectory.size() - 1);
            auto d = reduce_rhs(a.trajectory[i], a.load, a.setup, t);
            stretch = std::max(stretch, std::abs(d.x * d.x + d.y * d.y - 1.0));
            const auto& sa = a.trajectory[i];
            const auto& sb = b.trajectory[i];
            mirror = std::max({mirror, std::abs(sa.x - sb.x), std::abs(sa.y + sb.y), std::abs(sa.theta + sb.theta),
                               std::abs(sa.v + sb.v), std::abs(sa.m + sb.m)});
        }
    }
    c.summary = fmt::format("{} solutions, max |x'^2+y'^2-1| = {:.3g}, max mirror defect = {:.3g}", cases.size(),
                            stretch, mirror);
    c.require(stretch <= 4.0 * std::numeric_limits<double>::epsilon(), "inextensibility violated");
    c.require(mirror <= 1e-8, "mirror symmetry violated");
    return c.result(13, "inextensibility and mirror symmetry");
}

using Runner = std::function<CriterionResult(std::size_t)>;

const std::vector<std::pair<std::string, Runner>>& runners() {
    static const std::vector<std::pair<std::string, Runner>> r{
        {"kappa_cr reproduction", kappa_critical},
        {"fold reproduction", fold},
        {"branch-minimum reproduction", branch_minimum},
        {"curve-point regression", curve_points},
        {"oracle equivalence", oracle_equivalence},
        {"classical limit", classical_limit},
        {"classification regression", classification},
        {"mode residuals", mode_residuals},
        {"reduction robustness", robustness},
        {"unfolding regression", unfolding},
        {"post-buckling morphology", morphology},
        {"pitchfork scaling", scaling},
        {"inextensibility and mirror symmetry", invariants},
    };
    return r;
}

std::vector<std::string> observations() {
    std::vector<std::string> info;
    try {
        auto f = find_fold(0.375325);
        info.push_back(fmt::format("fold at kappa 0.375325: {} (|lambda2| < 1e-3: {})", pt(f),
                                   std::abs(f.lambda2) < 1e-3 ? "yes" : "no"));
    } catch (const std::exception& e) {
        info.push_back(fmt::format("fold at kappa 0.375325: {}", e.what()));
    }
    for (double l1 : {5.0, 7.5}) {
        try {
            LoadPoint p0{l1, solve_lambda2(l1, 0.45, {}, 2)};
            auto y = mode_shape(p0, 0.45);
            auto rc = reduction_coefficients(p0, 0.45, y, adjoint_kernel(2, p0, 0.45));
            info.push_back(fmt::format("upper branch {}: {}", pt(p0), to_string(rc.verdict)));
        } catch (const std::exception& e) {
            info.push_back(fmt::format("upper branch lambda1 {}: {}", l1, e.what()));
        }
    }
    return info;
}

}  // namespace

CriterionResult run_criterion(int id, std::size_t grid) {
    const auto& r = runners();
    if (id < 1 || id > static_cast<int>(r.size()))
        throw InvalidInput(fmt::format("no acceptance criterion {}", id));
    const auto& [name, run] = r[id - 1];
    try {
        return run(grid);
    } catch (const std::exception& e) {
        return {id, name, false, std::string("error: ") + e.what()};
    }
}

AcceptanceReport run_acceptance(std::size_t grid) {
    AcceptanceReport rep;
    for (int id = 1; id <= static_cast<int>(runners().size()); ++id)
        rep.criteria.push_back(run_criterion(id, grid));
    rep.info = observations();
    return rep;
}

}  // namespace nlrod
