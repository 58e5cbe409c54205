#include "qzw/acceptance.hpp"
#include "qzw/error.hpp"
#include "qzw/graph_links.hpp"
#include "qzw/limit_kernel.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qzw;

namespace {

std::vector<LatticePoint> points_of(const std::vector<std::string>& s)
{
    std::vector<LatticePoint> out;
    for (const auto& t : s) out.push_back(parse_point(t));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "q-zw-measures on the double q-lattice";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, py::make_tuple(to_string(e.code()), e.what()));
        }
    });

    py::class_<LatticeParams>(m, "Lattice")
        .def(py::init<double, double, double>(), py::arg("q") = 0.5, py::arg("zeta_minus") = -1.0,
             py::arg("zeta_plus") = 1.0)
        .def_property_readonly("q", [](const LatticeParams& lp) { return lp.q().value(); })
        .def_property_readonly("zeta_minus", &LatticeParams::zeta_minus)
        .def_property_readonly("zeta_plus", &LatticeParams::zeta_plus)
        .def("value", [](const LatticeParams& lp, const std::string& p) { return lp.value(parse_point(p)); });

    py::class_<ParamQuadruple>(m, "Params")
        .def(py::init<cplx, cplx, cplx, cplx, LatticeParams>(), py::arg("alpha"), py::arg("beta"), py::arg("gamma"),
             py::arg("delta"), py::arg("lattice"))
        .def_property_readonly("admissible", &ParamQuadruple::admissible)
        .def_property_readonly("kernel_regime", [](const ParamQuadruple& p) { return p.kernel_regime; })
        .def_property_readonly("classification", [](const ParamQuadruple& p) { return to_string(p.classification); })
        .def_property_readonly("reason", [](const ParamQuadruple& p) { return p.reason; });

    m.def("reference_params", [] { return RunConfig{}.quadruple(); });

    m.def("link_row",
          [](const std::vector<std::string>& x, const LatticeParams& lp, double cutoff) {
              const LinkRow row = link_row(Configuration::from_unsorted(points_of(x)), lp, TailSpec{cutoff, -1.0});
              std::vector<std::pair<std::string, double>> out;
              for (const auto& e : row.entries) out.emplace_back(to_string(e.config), e.probability);
              return py::make_tuple(out, row.tail_mass_bound);
          },
          py::arg("x"), py::arg("lattice"), py::arg("cutoff") = 1e-12);

    py::class_<EnsembleN>(m, "Ensemble")
        .def(py::init<ParamQuadruple, int>(), py::arg("params"), py::arg("n"))
        .def_property_readonly("size", &EnsembleN::size)
        .def("weight",
             [](const EnsembleN& e, const std::vector<std::string>& x) {
                 return measure_weight(Configuration::from_unsorted(points_of(x)), e);
             })
        .def("kernel", [](const EnsembleN& e, const std::string& x, const std::string& y) {
            return cd_kernel_N(parse_point(x), parse_point(y), e);
        });

    py::class_<BoundaryKernel>(m, "BoundaryKernel")
        .def(py::init<ParamQuadruple>())
        .def("__call__", [](const BoundaryKernel& k, const std::string& x, const std::string& y) {
            return k(parse_point(x), parse_point(y));
        })
        .def("matrix", [](const BoundaryKernel& k, const std::vector<std::string>& pts) {
            return k.matrix(points_of(pts));
        })
        .def("correlation", [](const BoundaryKernel& k, const std::vector<std::string>& pts) {
            return boundary_correlation(points_of(pts), k).value;
        });

    m.def("F", [](int r, const std::string& x, const ParamQuadruple& pq) { return F_r(r, parse_point(x), pq); });
    m.def("h", &h_frak, py::arg("r"), py::arg("params"));

    m.def("run_acceptance", [](const std::vector<int>& only) {
        AcceptanceOptions o;
        o.only = only;
        std::vector<py::dict> out;
        for (const auto& r : run_acceptance(o)) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["measured"] = r.measured;
            d["tolerance"] = r.tolerance;
            d["detail"] = r.detail;
            out.push_back(d);
        }
        return out;
    }, py::arg("only") = std::vector<int>{});
}
