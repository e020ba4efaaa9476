#include "modcurv/cosphere.hpp"
#include "modcurv/errors.hpp"
#include "modcurv/modular.hpp"
#include "modcurv/numeric_oracle.hpp"
#include "modcurv/quadrature.hpp"
#include "modcurv/symbol_engine.hpp"
#include "modcurv/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace modcurv;

namespace {

OperatorSymbols symbols_for(const std::string& op) {
    return parse_operator(op) == OperatorKind::KDelta ? kdelta_symbols() : nc4tori_symbols();
}

py::dict report_dict(const CurvatureReport& r) {
    py::dict d;
    d["dim"] = r.dim;
    d["operator"] = operator_name(r.op);
    d["K"] = r.K.str();
    d["G"] = r.G.str();
    d["c_scalar"] = to_string(r.c_scalar);
    d["F1"] = to_string(r.F1);
    d["c_scalar_normalized"] = to_string(r.c_scalar_normalized);
    d["k_powers"] = py::dict(py::arg("hessian") = r.k_powers.hessian,
                             py::arg("gradient_pair") = r.k_powers.gradient_pair,
                             py::arg("scalar") = r.k_powers.scalar);
    d["term_count"] = r.term_count;
    d["notes"] = r.notes;
    return d;
}

FloatElement parse_h(const std::optional<std::string>& text, double norm) {
    return text ? parse_float_element(*text) : sample_weyl_log(norm);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Modular curvature of conformally perturbed noncommutative tori";

    auto base = py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<RuleTableExhausted>(m, "RuleTableExhausted", base.ptr());
    py::register_exception<IncompleteSubstitution>(m, "IncompleteSubstitution", base.ptr());
    py::register_exception<UnsupportedSignature>(m, "UnsupportedSignature", base.ptr());
    py::register_exception<DivergentIntegral>(m, "DivergentIntegral", base.ptr());

    m.def(
        "derive",
        [](int dim, const std::string& op) { return report_dict(derive_curvature(dim, parse_operator(op))); },
        py::arg("dim"), py::arg("operator") = "kdelta", "Closed-form K, G and scalar constant as strings.");
    m.def(
        "derive_json",
        [](int dim, const std::string& op) { return report_json(derive_curvature(dim, parse_operator(op))); },
        py::arg("dim"), py::arg("operator") = "kdelta");

    m.def(
        "eval_function",
        [](const std::string& f, double s, double t) { return eval_function(parse_symbolic_function(f), s, t); },
        py::arg("f"), py::arg("s"), py::arg("t") = 1.0);

    m.def(
        "resolvent_term",
        [](int kappa, const std::string& op) { return to_string(resolvent_b(kappa, symbols_for(op))); },
        py::arg("kappa"), py::arg("operator") = "kdelta");
    m.def(
        "sphere_average",
        [](const std::string& expr, int dim) { return to_string(sphere_average(parse_expression(expr), dim)); },
        py::arg("expr"), py::arg("dim"));

    m.def(
        "quad_r_integral",
        [](const std::vector<int>& exps, double s, double t) { return quad_r_integral(exps, s, t); },
        py::arg("exps"), py::arg("s"), py::arg("t") = 1.0);

    m.def(
        "gauss_bonnet_residual",
        [](double theta, const std::optional<std::string>& h, double norm, int order, int cap) {
            return gauss_bonnet_residual(parse_h(h, norm), SkewMatrix::standard(theta), order, cap);
        },
        py::arg("theta"), py::arg("h") = py::none(), py::arg("norm") = 0.1, py::arg("order") = 8,
        py::arg("cap") = 40);

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, int jobs) {
            VerifyOptions opts;
            opts.seed = seed;
            opts.jobs = jobs;
            std::vector<py::dict> out;
            for (const auto& r : run_checks(verify_suite(suite), opts))
                out.push_back(py::dict(py::arg("name") = r.name, py::arg("max_err") = r.max_err,
                                       py::arg("tol") = r.tol, py::arg("pass") = r.pass()));
            return out;
        },
        py::arg("suite") = "all", py::arg("seed") = 0, py::arg("jobs") = 1);
}
