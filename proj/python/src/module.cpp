#include "nlrod/bvp_solver.hpp"
#include "nlrod/char_curve.hpp"
#include "nlrod/errors.hpp"
#include "nlrod/lin_modes.hpp"
#include "nlrod/ls_reduction.hpp"
#include "nlrod/unfolding.hpp"
#include "nlrod/verification.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nlrod;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict reduction_dict(const ReductionCoefficients& rc) {
    py::dict d;
    d["c11"] = rc.c11;
    d["c12"] = rc.c12;
    d["c13"] = rc.c13;
    d["c3"] = rc.c3;
    d["eta_prime"] = rc.eta_prime;
    d["transverse_linear"] = rc.transverse_linear;
    d["tangent_linear"] = rc.tangent_linear;
    d["epsilon"] = rc.epsilon;
    d["delta"] = rc.delta;
    d["verdict"] = to_string(rc.verdict);
    return d;
}

LoadPoint critical(double kappa, double lambda1, int which) { return {lambda1, solve_lambda2(lambda1, kappa, {}, which)}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlocal rotating rod: critical curves, reduction, unfolding, post-buckling";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    (void)domain;
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    m.attr("default_grid") = default_grid;

    m.def("char_residual", [](double l1, double l2, double kappa) { return char_residual({l1, l2}, kappa); },
          py::arg("lambda1"), py::arg("lambda2"), py::arg("kappa"));
    m.def("eta_prime", [](double l1, double l2, double kappa) { return eta_prime({l1, l2}, kappa); },
          py::arg("lambda1"), py::arg("lambda2"), py::arg("kappa"));
    m.def("lambda2_limit", &lambda2_limit, py::arg("kappa"));
    m.def(
        "lambda2_roots",
        [](double l1, double kappa, std::optional<std::pair<double, double>> bracket) {
            std::optional<Interval> b;
            if (bracket)
                b = Interval{bracket->first, bracket->second};
            return lambda2_roots(l1, kappa, b);
        },
        py::arg("lambda1"), py::arg("kappa"), py::arg("bracket") = py::none());
    m.def(
        "solve_lambda2", [](double l1, double kappa, int which) { return solve_lambda2(l1, kappa, {}, which); },
        py::arg("lambda1"), py::arg("kappa"), py::arg("which") = 1);

    m.def(
        "trace_curve",
        [](double kappa, const std::vector<double>& grid, int mode) {
            py::list out;
            for (const auto& c : trace_curve(kappa, grid, mode)) {
                std::vector<double> l1, l2, ep;
                for (const auto& p : c.points) {
                    l1.push_back(p.p.lambda1);
                    l2.push_back(p.p.lambda2);
                    ep.push_back(p.eta_prime);
                }
                py::dict d;
                d["branch"] = to_string(c.branch_tag);
                d["lambda1"] = to_array(l1);
                d["lambda2"] = to_array(l2);
                d["eta_prime"] = to_array(ep);
                d["fold"] = c.fold ? py::object(py::make_tuple(c.fold->lambda1, c.fold->lambda2)) : py::none();
                out.append(d);
            }
            return out;
        },
        py::arg("kappa"), py::arg("lambda1_grid"), py::arg("mode") = 1);

    auto pair_of = [](const LoadPoint& p) { return std::make_pair(p.lambda1, p.lambda2); };
    m.def("find_fold", [pair_of](double kappa) { return pair_of(find_fold(kappa)); }, py::arg("kappa"));
    m.def(
        "find_branch_minimum", [pair_of](double kappa) { return pair_of(find_branch_minimum(kappa)); },
        py::arg("kappa"));
    m.def("find_kappa_cr", []() {
        auto k = find_kappa_cr();
        return std::make_pair(k.kappa, k.lambda1);
    });

    m.def(
        "mode_shape",
        [](double kappa, double l1, int which, std::size_t points, std::size_t grid) {
            auto y = mode_shape(critical(kappa, l1, which), kappa, grid);
            std::vector<double> t, v;
            for (std::size_t i = 0; i < points; ++i) {
                t.push_back(static_cast<double>(i) / (points - 1));
                v.push_back(y.eval(t.back()));
            }
            return std::make_pair(to_array(t), to_array(v));
        },
        py::arg("kappa"), py::arg("lambda1"), py::arg("which") = 1, py::arg("points") = 201,
        py::arg("grid") = default_grid);

    m.def(
        "reduce",
        [](double kappa, double l1, int which, int kernel, std::size_t grid) {
            auto p = critical(kappa, l1, which);
            auto y = mode_shape(p, kappa, grid);
            auto rc = reduction_coefficients(p, kappa, y, adjoint_kernel(kernel, p, kappa, grid), grid);
            auto d = reduction_dict(rc);
            d["lambda1"] = p.lambda1;
            d["lambda2"] = p.lambda2;
            return d;
        },
        py::arg("kappa"), py::arg("lambda1"), py::arg("which") = 1, py::arg("kernel") = 2,
        py::arg("grid") = default_grid);

    m.def(
        "unfold",
        [](double kappa, double l1, int which, std::optional<CurvatureFn> rho, std::size_t grid) {
            auto p = critical(kappa, l1, which);
            auto y = mode_shape(p, kappa, grid);
            auto q = adjoint_kernel(2, p, kappa, grid);
            auto rc = reduction_coefficients(p, kappa, y, q, grid);
            auto uc = unfolding_coefficients(p, kappa, y, q, rho ? *rho : CurvatureFn(fixture_curvature), grid);
            auto dec = is_universal_unfolding(rc, uc);
            py::dict d;
            for (const auto& [name, v] : uc.table())
                d[py::str(name)] = v;
            d["determinant"] = unfolding_determinant(uc);
            d["universal"] = dec.universal;
            d["reason"] = dec.reason;
            return d;
        },
        py::arg("kappa"), py::arg("lambda1"), py::arg("which") = 1, py::arg("curvature") = py::none(),
        py::arg("grid") = default_grid);

    m.def(
        "postbuckle",
        [](double kappa, double l1, double delta, const std::string& direction, int which, int sign,
           std::size_t grid) {
            ShootOptions opt;
            opt.n_steps = grid;
            auto sol = solve_postbuckling(critical(kappa, l1, which), kappa, delta, direction_from_string(direction),
                                          sign, opt);
            std::vector<double> x, y;
            for (const auto& s : sol.trajectory) {
                x.push_back(s.x);
                y.push_back(s.y);
            }
            py::dict d;
            d["x"] = to_array(x);
            d["y"] = to_array(y);
            d["lambda1"] = sol.load.lambda1;
            d["lambda2"] = sol.load.lambda2;
            d["tip_deflection"] = tip_deflection(sol);
            d["node_count"] = node_count(sol);
            d["residual_M2"] = residual_M2(sol);
            return d;
        },
        py::arg("kappa"), py::arg("lambda1"), py::arg("delta"), py::arg("direction") = "along-lambda1",
        py::arg("which") = 1, py::arg("sign") = 1, py::arg("grid") = default_grid);

    m.def(
        "run_acceptance",
        [](std::size_t grid) {
            auto rep = run_acceptance(grid);
            py::list out;
            for (const auto& c : rep.criteria)
                out.append(py::make_tuple(c.id, c.name, c.passed, c.detail));
            return out;
        },
        py::arg("grid") = default_grid);
}
