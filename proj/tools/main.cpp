#include "config.hpp"
#include "table.hpp"

#include "nlrod/bvp_solver.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"
#include "nlrod/lin_modes.hpp"
#include "nlrod/ls_reduction.hpp"
#include "nlrod/unfolding.hpp"
#include "nlrod/verification.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

using namespace nlrod;
using cli::Cell;
using cli::Table;

namespace {

constexpr int exit_usage = 1, exit_domain = 2, exit_convergence = 3, exit_verify = 4;

struct Common {
    std::string format = "csv";
    std::string out;
    std::size_t grid = default_grid;
    std::string config;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out,-o", c.out, "output file (default stdout)");
    sub->add_option("--grid", c.grid, "grid intervals N (even)");
    sub->add_option("--config", c.config, "flat key=value file with option defaults");
}

cli::Format format_of(const Common& c) { return c.format == "json" ? cli::Format::json : cli::Format::csv; }

void check_grid(std::size_t n) {
    if (n < 16 || n % 2 != 0)
        throw InvalidInput("grid must be an even number >= 16");
}

double parse_number(const std::string& s) {
    double v = 0.0;
    auto first = s.data(), last = s.data() + s.size();
    while (first < last && *first == ' ')
        ++first;
    if (first < last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    while (ptr < last && (*ptr == ' ' || *ptr == '\r'))
        ++ptr;
    if (ec != std::errc() || ptr != last)
        throw InvalidInput("not a number: '" + s + "'");
    return v;
}

// "a:b:h" inclusive of b up to rounding.
std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= spec.size(); ++i)
        if (i == spec.size() || spec[i] == ':') {
            parts.push_back(spec.substr(start, i - start));
            start = i + 1;
        }
    if (parts.size() != 3)
        throw InvalidInput("range must look like start:stop:step");
    double a = parse_number(parts[0]), b = parse_number(parts[1]), h = parse_number(parts[2]);
    if (!(h > 0.0))
        throw InvalidInput("range step must be positive");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        double x = a + static_cast<double>(i) * h;
        if (x > b + 1e-9 * h)
            break;
        out.push_back(x);
    }
    return out;
}

int which_of(const std::string& branch) {
    if (branch == "lower")
        return 1;
    if (branch == "upper")
        return 2;
    throw InvalidInput("branch must be lower or upper");
}

// Critical point on the requested branch at the given lambda1.
LoadPoint critical_point(double kappa, double l1, const std::string& branch) {
    return {l1, solve_lambda2(l1, kappa, {}, which_of(branch))};
}

// Two-column t,value curvature profile, linearly interpolated.
CurvatureFn read_profile(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw InvalidInput("cannot read profile " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidInput("profile line without comma: " + line);
        try {
            pts.emplace_back(parse_number(line.substr(0, comma)), parse_number(line.substr(comma + 1)));
        } catch (const InvalidInput&) {
            if (!first)
                throw;
        }
        first = false;
    }
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 2 || pts.front().first > 0.0 || pts.back().first < 1.0)
        throw InvalidInput("profile must cover t in [0, 1] with at least two samples");
    return [pts](double t) {
        auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(t, -HUGE_VAL));
        if (it == pts.begin())
            return it->second;
        if (it == pts.end())
            return pts.back().second;
        auto lo = it - 1;
        double w = (t - lo->first) / (it->first - lo->first);
        return lo->second + w * (it->second - lo->second);
    };
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t points) {
    if (points < 2)
        throw InvalidInput("need at least two output points");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < points; ++i)
        idx.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(i) * n / (points - 1))));
    return idx;
}

// ---- commands --------------------------------------------------------------

struct CurveArgs {
    double kappa = 0;
    std::string l1 = "0.05:20:0.05";
    int mode = 1;
    std::optional<double> l2_max;
};

Table cmd_curve(const CurveArgs& a) {
    auto grid = parse_range(a.l1);
    TraceOptions opt;
    if (a.l2_max)
        opt.lambda2_hi = *a.l2_max;
    Table t;
    t.columns = {"kappa", "mode", "branch", "lambda1", "lambda2", "eta_prime"};
    t.add_meta("kappa", a.kappa);
    t.add_meta("mode", static_cast<long long>(a.mode));
    std::vector<BranchCurve> curves;
    curves = trace_curve(a.kappa, grid, a.mode, opt);
    std::stable_sort(curves.begin(), curves.end(),
                     [](const BranchCurve& x, const BranchCurve& y) { return x.branch_tag < y.branch_tag; });
    std::optional<LoadPoint> fold;
    for (const auto& c : curves) {
        auto pts = c.points;
        std::sort(pts.begin(), pts.end(),
                  [](const CurvePoint& x, const CurvePoint& y) { return x.p.lambda1 < y.p.lambda1; });
        for (const auto& p : pts)
            t.rows.push_back({a.kappa, static_cast<long long>(a.mode), to_string(c.branch_tag), p.p.lambda1,
                              p.p.lambda2, p.eta_prime});
        if (c.fold)
            fold = c.fold;
    }
    if (fold)
        t.rows.push_back({a.kappa, static_cast<long long>(a.mode), std::string("fold"), fold->lambda1, fold->lambda2,
                          Cell{}});
    t.add_meta("rows", static_cast<long long>(t.rows.size()));
    return t;
}

Table cmd_kcr() {
    auto k = find_kappa_cr();
    Table t;
    t.columns = {"kappa_cr", "lambda1"};
    t.rows.push_back({k.kappa, k.lambda1});
    return t;
}

struct FoldArgs {
    double kappa = 0;
    std::optional<double> guess_l1, guess_l2;
    bool minimum = false;
};

Table cmd_fold(const FoldArgs& a) {
    LoadPoint p;
    if (a.guess_l1.has_value() != a.guess_l2.has_value())
        throw InvalidInput("give both --guess-l1 and --guess-l2 or neither");
    std::optional<LoadPoint> guess;
    if (a.guess_l1)
        guess = LoadPoint{*a.guess_l1, *a.guess_l2};
    if (a.minimum)
        p = guess ? find_branch_minimum(a.kappa, *guess) : find_branch_minimum(a.kappa);
    else
        p = guess ? find_fold(a.kappa, *guess) : find_fold(a.kappa);
    Table t;
    t.columns = {"kind", "kappa", "lambda1", "lambda2"};
    t.rows.push_back({std::string(a.minimum ? "minimum" : "fold"), a.kappa, p.lambda1, p.lambda2});
    return t;
}

struct PointArgs {
    double kappa = 0;
    double l1 = 0;
    std::string branch = "lower";
    std::optional<double> l2;  // overrides the branch root
};

LoadPoint point_of(const PointArgs& a) {
    if (a.l2)
        return {a.l1, *a.l2};
    return critical_point(a.kappa, a.l1, a.branch);
}

struct ModeArgs : PointArgs {
    std::string what = "mode";
    std::size_t points = 201;
};

Table cmd_mode(const ModeArgs& a, std::size_t grid) {
    auto p = point_of(a);
    Table t;
    t.add_meta("kappa", a.kappa);
    t.add_meta("lambda1", p.lambda1);
    t.add_meta("lambda2", p.lambda2);
    t.add_meta("function", a.what);
    TrigHyp f;
    if (a.what == "mode") {
        auto y = mode_shape(p, a.kappa, grid);
        t.add_meta("D", y.D);
        t.add_meta("node_count", static_cast<long long>(node_count(y, grid)));
        auto r = linear_residual_L4(y, p, a.kappa, grid);
        t.add_meta("residual_interior", r.interior);
        t.add_meta("residual_boundary", r.boundary_max());
        f = y;
    } else {
        auto q = adjoint_kernel(a.what == "q2" ? 2 : 4, p, a.kappa, grid);
        t.add_meta("E", q.E);
        auto r = adjoint_residual(q, grid);
        t.add_meta("residual_interior", r.interior);
        t.add_meta("residual_boundary", r.boundary_max());
        f = q;
    }
    t.columns = {"t", "y"};
    for (auto i : sample_indices(grid, a.points)) {
        double s = static_cast<double>(i) / grid;
        t.rows.push_back({s, f.eval(s)});
    }
    return t;
}

struct ReduceArgs : PointArgs {
    int kernel = 2;
};

Table cmd_reduce(const ReduceArgs& a, std::size_t grid) {
    auto p = point_of(a);
    auto y = mode_shape(p, a.kappa, grid);
    auto rc = reduction_coefficients(p, a.kappa, y, adjoint_kernel(a.kernel, p, a.kappa, grid), grid);
    Table t;
    t.columns = {"kappa", "lambda1", "lambda2", "kernel", "c11",   "c12",    "c13",
                 "c3",    "eta_prime", "transverse", "tangent", "epsilon", "delta", "verdict"};
    t.rows.push_back({a.kappa, p.lambda1, p.lambda2, static_cast<long long>(a.kernel), rc.c11, rc.c12, rc.c13, rc.c3,
                      rc.eta_prime, rc.transverse_linear, rc.tangent_linear, static_cast<long long>(rc.epsilon),
                      static_cast<long long>(rc.delta), to_string(rc.verdict)});
    return t;
}

struct UnfoldArgs : PointArgs {
    std::string profile;
};

Table cmd_unfold(const UnfoldArgs& a, std::size_t grid) {
    auto p = point_of(a);
    CurvatureFn rho = a.profile.empty() ? CurvatureFn(fixture_curvature) : read_profile(a.profile);
    auto y = mode_shape(p, a.kappa, grid);
    auto q = adjoint_kernel(2, p, a.kappa, grid);
    auto rc = reduction_coefficients(p, a.kappa, y, q, grid);
    auto uc = unfolding_coefficients(p, a.kappa, y, q, rho, grid);
    auto dec = is_universal_unfolding(rc, uc);
    Table t;
    t.add_meta("kappa", a.kappa);
    t.add_meta("lambda1", p.lambda1);
    t.add_meta("lambda2", p.lambda2);
    t.add_meta("profile", a.profile.empty() ? std::string("fixture") : a.profile);
    t.add_meta("determinant", unfolding_determinant(uc));
    t.add_meta("universal", static_cast<long long>(dec.universal));
    t.add_meta("reason", dec.reason);
    t.columns = {"name", "value", "note"};
    for (const auto& [name, v] : uc.table())
        t.rows.push_back({name, v, Cell{}});
    t.rows.push_back({std::string("determinant"), unfolding_determinant(uc), Cell{}});
    t.rows.push_back({std::string("universal"), static_cast<long long>(dec.universal), dec.reason});
    return t;
}

struct PostArgs : PointArgs {
    std::optional<double> dl1, dl2, delta;
    std::string direction;
    int sign = 1;
    double alpha1 = 0, alpha2 = 0;
    std::string profile;
    std::size_t points = 201;
};

Table cmd_postbuckle(const PostArgs& a, std::size_t grid) {
    ShootOptions opt;
    opt.n_steps = grid;
    BvpSolution sol;
    Table t;
    if (a.l2) {
        // Direct shot at a prescribed load from the straight configuration.
        RodSetup setup;
        setup.kappa = a.kappa;
        setup.alpha1 = a.alpha1;
        setup.alpha2 = a.alpha2;
        if (a.alpha1 != 0.0)
            setup.rho0 = a.profile.empty() ? CurvatureFn(fixture_curvature) : read_profile(a.profile);
        sol = shoot({a.l1, *a.l2}, setup, 0.0, 0.0, opt);
        t.add_meta("mode", std::string("direct"));
    } else {
        if (a.alpha1 != 0.0 || a.alpha2 != 0.0)
            throw InvalidInput("imperfections need a prescribed load (--l2)");
        int given = a.dl1.has_value() + a.dl2.has_value() + a.delta.has_value();
        if (given != 1)
            throw InvalidInput("give exactly one of --dl1, --dl2, --delta");
        Direction dir;
        double delta;
        if (a.delta) {
            if (a.direction.empty())
                throw InvalidInput("--delta needs --direction");
            dir = direction_from_string(a.direction);
            delta = *a.delta;
        } else if (a.dl1) {
            dir = a.direction.empty() ? Direction::along_lambda1 : direction_from_string(a.direction);
            delta = *a.dl1;
        } else {
            dir = a.direction.empty() ? Direction::fixed_lambda1 : direction_from_string(a.direction);
            delta = *a.dl2;
        }
        auto p0 = critical_point(a.kappa, a.l1, a.branch);
        sol = solve_postbuckling(p0, a.kappa, delta, dir, a.sign, opt);
        t.add_meta("mode", std::string("post-buckling"));
        t.add_meta("critical_lambda1", p0.lambda1);
        t.add_meta("critical_lambda2", p0.lambda2);
        t.add_meta("direction", to_string(dir));
        t.add_meta("delta", delta);
    }
    t.add_meta("kappa", a.kappa);
    t.add_meta("lambda1", sol.load.lambda1);
    t.add_meta("lambda2", sol.load.lambda2);
    t.add_meta("v0", sol.v0);
    t.add_meta("m0", sol.m0);
    t.add_meta("tip_deflection", tip_deflection(sol));
    t.add_meta("node_count", static_cast<long long>(node_count(sol)));
    t.add_meta("residual_M2", residual_M2(sol));
    t.columns = {"x", "y"};
    for (auto i : sample_indices(sol.trajectory.size() - 1, a.points))
        t.rows.push_back({sol.trajectory[i].x, sol.trajectory[i].y});
    return t;
}

Table cmd_verify(std::size_t grid, bool& ok) {
    auto rep = run_acceptance(grid);
    Table t;
    t.columns = {"id", "criterion", "status", "detail"};
    for (const auto& c : rep.criteria)
        t.rows.push_back({static_cast<long long>(c.id), c.name, std::string(c.passed ? "PASS" : "FAIL"), c.detail});
    for (std::size_t i = 0; i < rep.info.size(); ++i)
        t.add_meta(fmt::format("info{}", i + 1), rep.info[i]);
    ok = rep.all_passed();
    return t;
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0)
            return args[i].substr(9);
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (auto path = config_path(args))
            args = cli::merge_config(args, cli::read_config(*path));
    } catch (const cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }

    CLI::App app{"Nonlocal rotating rod: critical curves, reduction, unfolding and post-buckling"};
    app.name("nlrod");
    app.require_subcommand(1);
    Common common;

    CurveArgs curve;
    auto* s_curve = app.add_subcommand("curve", "trace the critical curve of one mode");
    s_curve->add_option("--kappa", curve.kappa)->required();
    s_curve->add_option("--l1", curve.l1, "lambda1 range start:stop:step");
    s_curve->add_option("--mode", curve.mode)->check(CLI::PositiveNumber);
    s_curve->add_option("--l2-max", curve.l2_max, "upper end of the lambda2 scan");
    add_common(s_curve, common);

    auto* s_kcr = app.add_subcommand("kcr", "critical non-locality parameter");
    add_common(s_kcr, common);

    FoldArgs fold;
    auto* s_fold = app.add_subcommand("fold", "fold (or branch minimum) of the first-mode curve");
    s_fold->add_option("--kappa", fold.kappa)->required();
    s_fold->add_option("--guess-l1", fold.guess_l1);
    s_fold->add_option("--guess-l2", fold.guess_l2);
    s_fold->add_flag("--minimum", fold.minimum, "locate the branch minimum instead");
    add_common(s_fold, common);

    auto add_point = [](CLI::App* s, PointArgs& p) {
        s->add_option("--kappa", p.kappa)->required();
        s->add_option("--l1", p.l1)->required();
        s->add_option("--branch", p.branch, "lower or upper root at this lambda1")
            ->check(CLI::IsMember({"lower", "upper"}));
    };

    ModeArgs mode;
    auto* s_mode = app.add_subcommand("mode", "sampled mode shape or adjoint kernel");
    add_point(s_mode, mode);
    s_mode->add_option("--l2", mode.l2, "critical lambda2 (skips the root solve)");
    s_mode->add_option("--function", mode.what)->check(CLI::IsMember({"mode", "q2", "q4"}));
    s_mode->add_option("--points", mode.points);
    add_common(s_mode, common);

    ReduceArgs reduce;
    auto* s_reduce = app.add_subcommand("reduce", "reduction coefficients and pitchfork verdict");
    add_point(s_reduce, reduce);
    s_reduce->add_option("--l2", reduce.l2, "critical lambda2 (skips the root solve)");
    s_reduce->add_option("--kernel", reduce.kernel)->check(CLI::IsMember({2, 4}));
    add_common(s_reduce, common);

    UnfoldArgs unfold;
    auto* s_unfold = app.add_subcommand("unfold", "imperfection coefficients and universality");
    add_point(s_unfold, unfold);
    s_unfold->add_option("--l2", unfold.l2, "critical lambda2 (skips the root solve)");
    s_unfold->add_option("--profile", unfold.profile, "curvature profile CSV t,value");
    add_common(s_unfold, common);

    PostArgs post;
    auto* s_post = app.add_subcommand("postbuckle", "nonlinear shape near a critical point");
    add_point(s_post, post);
    s_post->add_option("--l2", post.l2, "prescribed lambda2: solve at (l1, l2) from the straight rod");
    s_post->add_option("--dl1", post.dl1, "lambda1 offset (default direction along-lambda1)");
    s_post->add_option("--dl2", post.dl2, "lambda2 offset (default direction fixed-lambda1)");
    s_post->add_option("--delta", post.delta, "offset for --direction");
    s_post->add_option("--direction", post.direction)
        ->check(CLI::IsMember({"along-lambda1", "along-lambda2", "fixed-lambda2", "fixed-lambda1"}));
    s_post->add_option("--sign", post.sign)->check(CLI::IsMember({1, -1}));
    s_post->add_option("--alpha1", post.alpha1);
    s_post->add_option("--alpha2", post.alpha2);
    s_post->add_option("--profile", post.profile, "curvature profile CSV t,value");
    s_post->add_option("--points", post.points);
    add_common(s_post, common);

    auto* s_verify = app.add_subcommand("verify", "run the acceptance checks");
    add_common(s_verify, common);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        check_grid(common.grid);
        Table t;
        int code = 0;
        if (*s_curve)
            t = cmd_curve(curve);
        else if (*s_kcr)
            t = cmd_kcr();
        else if (*s_fold)
            t = cmd_fold(fold);
        else if (*s_mode)
            t = cmd_mode(mode, common.grid);
        else if (*s_reduce)
            t = cmd_reduce(reduce, common.grid);
        else if (*s_unfold)
            t = cmd_unfold(unfold, common.grid);
        else if (*s_post)
            t = cmd_postbuckle(post, common.grid);
        else {
            bool ok = false;
            t = cmd_verify(common.grid, ok);
            code = ok ? 0 : exit_verify;
        }
        cli::write_output(common.out, cli::render(t, format_of(common)));
        return code;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return exit_convergence;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_domain;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
