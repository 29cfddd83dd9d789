#include "egqft/adiabatic_limits.hpp"
#include "egqft/causal_splitting.hpp"
#include "egqft/model_registry.hpp"
#include "egqft/power_counting.hpp"
#include "egqft/propagators.hpp"
#include "egqft/wick_pairing.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace egq;

namespace {

ModelSpec model_with_c(const std::string& name, int c) {
    ModelSpec m = load_model(name);
    return c < 0 ? m : with_c(m, c);
}

// slots given as lists of field names; "d0", "d1".. prefixes are not supported here
SList slist_from_names(const std::vector<std::vector<std::string>>& slots, const FieldTable& ft) {
    SList out;
    for (auto& slot : slots) {
        SuperQuadriIndex s;
        for (auto& name : slot) {
            auto id = ft.find(name);
            if (!id) throw DomainError("unknown field '" + name + "'");
            s.add(Generator{*id, {0, 0, 0, 0}}, 1);
        }
        out.push_back(s);
    }
    return out;
}

py::dict limit_dict(const LimitReport& r) {
    py::dict d;
    d["estimate"] = r.estimate;
    d["converged"] = r.converged;
    d["log_slope"] = r.log_slope;
    d["slope_sigma"] = r.slope_sigma;
    d["slope_significant"] = r.slope_significant;
    d["diagnostics"] = r.diagnostics;
    return d;
}

Prescription parse_prescription(const std::string& p) {
    if (p == "feynman") return Prescription::feynman;
    if (p == "advanced") return Prescription::advanced;
    if (p == "retarded") return Prescription::retarded;
    throw std::invalid_argument("prescription must be feynman, advanced or retarded");
}

}  // namespace

PYBIND11_MODULE(_egqft, m) {
    m.doc() = "causal perturbation theory toolkit";
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("builtin_names", &builtin_names);
    m.def("generator_count", [](const std::string& name) { return load_model(name).fields.size(); }, py::arg("model"));

    m.def(
        "classify",
        [](const std::string& name, int c) {
            const ModelVerdict v = validate(model_with_c(name, c));
            return py::make_tuple(to_string(v.renormalizability), v.wal_eligible, v.reasons);
        },
        py::arg("model"), py::arg("c") = -1, "(class, wal_eligible, reasons)");

    m.def(
        "subpolynomials",
        [](const std::string& name, const std::string& view) {
            const ModelSpec spec = load_model(name);
            const SubpolyView sv = view == "all" ? SubpolyView::all
                                   : view == "distinct" ? SubpolyView::distinct_up_to_constant
                                                        : SubpolyView::by_multiplet;
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (auto& s : subpolynomials(spec.vertices.at(0).poly, spec.fields, sv))
                out.emplace_back(to_string(s.s, spec.fields), to_string(canonical_dim(s.poly, spec.fields)),
                                 to_string(s.poly, spec.fields));
            return out;
        },
        py::arg("model"), py::arg("view") = "multiplet", "(s, dim, poly) for the first vertex");

    m.def(
        "omega",
        [](const std::string& name, const std::map<std::string, int>& ext, const std::map<std::string, int>& der, int c) {
            const Omega w = omega_from_counts(model_with_c(name, c), ext, der);
            return py::make_tuple(to_string(w.raw), w.vanishing_sector());
        },
        py::arg("model"), py::arg("ext"), py::arg("der") = std::map<std::string, int>{}, py::arg("c") = -1);

    m.def("omega_general", [](const std::vector<std::string>& dims, int c) {
        std::vector<Rational> d;
        for (auto& s : dims) d.push_back(parse_rational(s));
        return to_string(omega_general(d, c).raw);
    });

    m.def(
        "wick_expand",
        [](const std::string& name, int order) {
            const ModelSpec spec = load_model(name);
            py::list out;
            for (auto& t : wick_expand(std::vector<Polynomial>(static_cast<std::size_t>(order), spec.vertices.at(0).poly), spec.fields)) {
                py::dict d;
                std::vector<std::string> sl;
                for (auto& s : t.s_list) sl.push_back(to_string(s, spec.fields));
                d["s_list"] = sl;
                d["sign"] = t.sign;
                d["weight"] = to_string(t.weight);
                d["vev"] = vev_key(t, spec.fields);
                d["forced_zero"] = t.vev_forced_zero;
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("order") = 2);

    m.def(
        "complete_pairings",
        [](const std::string& name, const std::vector<std::vector<std::string>>& left,
           const std::vector<std::vector<std::string>>& right, bool all_subsets, bool force) {
            const ModelSpec spec = load_model(name);
            PairingOptions opts;
            opts.mode = all_subsets ? PairingMode::all_subsets : PairingMode::full;
            opts.force = force;
            py::list out;
            for (auto& t : complete_pairings(slist_from_names(left, spec.fields), slist_from_names(right, spec.fields), spec, opts)) {
                py::dict d;
                std::vector<std::pair<std::string, std::string>> pairs;
                for (auto& [l, r] : t.pairs) pairs.emplace_back(to_string(l.gen, spec.fields), to_string(r.gen, spec.fields));
                d["pairs"] = pairs;
                d["constant"] = to_string(t.constant);
                d["class"] = to_string(t.classification);
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("left"), py::arg("right"), py::arg("all_subsets") = false, py::arg("force") = false);

    m.def("isserlis", py::overload_cast<const std::vector<std::vector<double>>&, const std::vector<int>&>(&isserlis_oracle),
          py::arg("cov"), py::arg("occurrences"));
    m.def("expand_aT_count", [](int n) { return expand_aT(n).terms.size(); });
    m.def("fubini_number", [](int n) { return to_string(fubini_number(n)); });
    m.def("telescoping_cancels", [](int n, const std::vector<int>& parities) {
        return telescoping_left(n, parities).expand_to_T().is_zero() && telescoping_right(n, parities).expand_to_T().is_zero();
    }, py::arg("n"), py::arg("parities") = std::vector<int>{});

    m.def("gamma_trace", [](const std::vector<int>& idx) { return gamma_trace(idx).to_complex(); });
    m.def("feynman_propagator", &feynman_propagator, py::arg("mass"), py::arg("q"), py::arg("iepsilon") = 0.0);
    m.def("two_body_phase_space", &two_body_phase_space, py::arg("m1"), py::arg("m2"), py::arg("s"));
    m.def("riesz_residual", [](double width, double shift) { return riesz_check(width, shift).residual; },
          py::arg("width") = 1.0, py::arg("shift") = 0.0);

    m.def(
        "self_energy",
        [](double mass, const std::vector<double>& q2, int n_sub, const std::string& prescription) {
            SelfEnergy se(bubble_density(mass, mass), n_sub);
            const Prescription p = parse_prescription(prescription);
            std::vector<std::complex<double>> out;
            for (double x : q2) out.push_back(dispersion_eval(se, x, p));
            return out;
        },
        py::arg("mass"), py::arg("q2"), py::arg("n_sub") = 2, py::arg("prescription") = "feynman");
    m.def("central_subtractions", &central_subtractions);
    m.def("freedom_basis_size", [](int omega, int n) { return freedom_basis(omega, n).multi_indices.size(); });
    m.def(
        "scaling_degree",
        [](const std::string& probe, int dim) {
            const ScalingDegree d = scaling_degree_estimate(probe == "delta" ? delta_probe(dim) : derivative_delta_probe(dim), dim);
            return py::make_tuple(d.value, d.indeterminate);
        },
        py::arg("probe") = "delta", py::arg("dim") = 4);

    m.def("theta", [](int n, double ell, const std::vector<FourVector>& ys) { return theta_eval(SplittingTheta{n, ell}, ys); },
          py::arg("n"), py::arg("ell"), py::arg("ys"));
    m.def(
        "adiabatic_demo",
        [](double c_mis, bool vanishing) {
            AppendixCOptions o;
            o.c_mis = c_mis;
            o.profile = vanishing ? SwitchProfile::vanishing_at_0 : SwitchProfile::flat;
            AppendixCResult r;
            {
                py::gil_scoped_release release;
                r = appendix_c_demo(builtin("scalar_model"), o);
            }
            py::dict d;
            d["advanced"] = limit_dict(r.advanced);
            d["retarded"] = limit_dict(r.retarded);
            d["difference"] = limit_dict(r.difference);
            d["expected_slope"] = r.expected_slope;
            return d;
        },
        py::arg("c_mis") = 0.0, py::arg("vanishing_at_zero") = false);
    m.def("gl_check", [](int order, double shift) {
        GlVsEgOptions o;
        o.order = order;
        o.constant_shift = shift;
        DecayReport r;
        {
            py::gil_scoped_release release;
            r = gl_vs_eg_second_order(builtin("scalar_model"), o);
        }
        return py::make_tuple(r.exponent, r.normalized, r.warnings);
    }, py::arg("order") = 2, py::arg("shift") = 0.0);
}
