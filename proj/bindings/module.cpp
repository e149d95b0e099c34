#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dirac/basis.hpp"
#include "dirac/core.hpp"
#include "dirac/determinant.hpp"
#include "dirac/kernels.hpp"
#include "dirac/regularity.hpp"
#include "dirac/spectra.hpp"
#include "dirac/timoshenko.hpp"

namespace py = pybind11;
using namespace dirac;

namespace {

Weights make_weights(double b1, double b2, std::optional<std::pair<long, long>> rational) {
    return Weights(b1, b2, rational);
}

PotentialGrid make_potential(std::vector<cplx> q12, std::vector<cplx> q21,
                             std::vector<cplx> q11, std::vector<cplx> q22) {
    const int m = int(q12.size()) - 1;
    return PotentialGrid(m, std::move(q12), std::move(q21), std::move(q11), std::move(q22));
}

py::dict verdict_dict(const RegularityVerdict& v) {
    py::dict out;
    out["regular"] = v.regular;
    out["strict"] = v.strict == StrictVerdict::yes
                        ? "yes"
                        : (v.strict == StrictVerdict::no ? "no" : "undetermined");
    out["branch"] = v.branch;
    py::dict w;
    for (const auto& [k, val] : v.witnesses) w[k.c_str()] = val;
    out["witnesses"] = w;
    return out;
}

py::list records_list(const std::vector<EigenvalueRecord>& records) {
    py::list out;
    for (const auto& r : records) {
        py::dict d;
        d["n"] = r.n;
        d["lambda"] = r.lambda;
        d["multiplicity"] = r.multiplicity;
        if (r.lambda0) d["lambda0"] = *r.lambda0;
        if (r.gap) d["gap"] = *r.gap;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral analysis of 2x2 Dirac-type boundary value problems";

    py::class_<Weights>(m, "Weights")
        .def(py::init(&make_weights), py::arg("b1"), py::arg("b2"),
             py::arg("rational") = std::nullopt)
        .def_property_readonly("b1", &Weights::b1)
        .def_property_readonly("b2", &Weights::b2)
        .def_property_readonly("alpha", &Weights::alpha)
        .def("probe_rational", &Weights::probe_rational);

    py::class_<ReducedBC>(m, "ReducedBC")
        .def(py::init([](cplx a, cplx b, cplx c, cplx d) { return ReducedBC{a, b, c, d}; }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_readonly("a", &ReducedBC::a)
        .def_readonly("b", &ReducedBC::b)
        .def_readonly("c", &ReducedBC::c)
        .def_readonly("d", &ReducedBC::d)
        .def_static("periodic", &ReducedBC::periodic)
        .def_static("antiperiodic", &ReducedBC::antiperiodic)
        .def_static("separated", &ReducedBC::separated, py::arg("b"), py::arg("c"));

    py::class_<PotentialGrid>(m, "PotentialGrid")
        .def(py::init(&make_potential), py::arg("q12"), py::arg("q21"),
             py::arg("q11") = std::vector<cplx>{}, py::arg("q22") = std::vector<cplx>{})
        .def_static("zero", &PotentialGrid::zero, py::arg("m"))
        .def_static("constant", &PotentialGrid::constant, py::arg("q12"), py::arg("q21"),
                    py::arg("m"))
        .def_property_readonly("m", &PotentialGrid::m)
        .def_property_readonly("off_diagonal", &PotentialGrid::off_diagonal);

    m.def(
        "check_regularity",
        [](const std::vector<cplx>& row1, const std::vector<cplx>& row2) {
            if (row1.size() != 4 || row2.size() != 4)
                throw std::invalid_argument("rows must have four coefficients");
            Eigen::Vector4cd r1, r2;
            for (int k = 0; k < 4; ++k) {
                r1(k) = row1[k];
                r2(k) = row2[k];
            }
            RegularityMinors mm = check_regularity(BoundaryPair::from_rows(r1, r2));
            py::dict out;
            out["j12"] = mm.j12;
            out["j13"] = mm.j13;
            out["j14"] = mm.j14;
            out["j32"] = mm.j32;
            out["j34"] = mm.j34;
            out["j42"] = mm.j42;
            out["regular"] = mm.regular;
            return out;
        },
        py::arg("row1"), py::arg("row2"),
        "Minors J_jk of the 2x4 block (C D) and the regularity flag");

    m.def(
        "reduce_bc",
        [](const std::vector<cplx>& row1, const std::vector<cplx>& row2) {
            Eigen::Vector4cd r1, r2;
            for (int k = 0; k < 4; ++k) {
                r1(k) = row1[k];
                r2(k) = row2[k];
            }
            Reduction red = reduce_bc(BoundaryPair::from_rows(r1, r2));
            return py::make_tuple(red.bc, red.scale);
        },
        py::arg("row1"), py::arg("row2"),
        "Normalize to J14 = 1; returns (ReducedBC, determinant scale)");

    m.def("classify_strict",
          [](const ReducedBC& bc, const Weights& w) { return verdict_dict(classify_strict(bc, w)); },
          py::arg("bc"), py::arg("weights"));

    m.def("delta0_eval",
          py::overload_cast<const ReducedBC&, const Weights&, cplx>(&delta0_eval),
          py::arg("bc"), py::arg("weights"), py::arg("lam"));

    m.def(
        "delta0_zeros",
        [](const ReducedBC& bc, const Weights& w, double re_min, double re_max) {
            auto listing = delta0_zero_family(bc, w, re_min, re_max);
            if (!listing) return py::object(py::none());
            py::dict out;
            out["branch"] = listing->branch;
            out["max_abs_imag"] = listing->max_abs_imag;
            out["zeros"] = records_list(records_from_listing(*listing));
            return py::object(out);
        },
        py::arg("bc"), py::arg("weights"), py::arg("re_min"), py::arg("re_max"),
        "Closed-form zero family of Delta0, or None when no closed form applies");

    m.def(
        "spectrum",
        [](const Weights& w, const PotentialGrid& q, const ReducedBC& bc, double re_min,
           double re_max, std::optional<double> strip) {
            DiracProblem p{w, q, bc.rows()};
            auto family = delta0_zero_family(bc, w, re_min, re_max);
            const double h =
                strip ? *strip : (family ? family->max_abs_imag + 1.0 : 2.0);
            auto handle = DeterminantHandle::via_propagator(p);
            auto records = find_zeros_strip(handle, Strip(h, re_min, re_max));
            if (family) {
                auto unp = records_from_listing(*family);
                pair_with_unperturbed(records, unp, re_min, re_max);
            }
            return records_list(records);
        },
        py::arg("weights"), py::arg("potential"), py::arg("bc"), py::arg("re_min"),
        py::arg("re_max"), py::arg("strip") = std::nullopt,
        "Locate eigenvalues of the problem in the strip window");

    m.def(
        "delta0_spectrum",
        [](const ReducedBC& bc, const Weights& w, double re_min, double re_max,
           double strip) {
            auto handle = DeterminantHandle::closed_form(bc, w);
            return records_list(find_zeros_strip(handle, Strip(strip, re_min, re_max)));
        },
        py::arg("bc"), py::arg("weights"), py::arg("re_min"), py::arg("re_max"),
        py::arg("strip"), "Strip search on the unperturbed determinant");

    m.def("a0_critical_d", &a0_critical_d, py::arg("alpha"), py::arg("abs_bc"));

    m.def(
        "find_strictifying_weight",
        [](const ReducedBC& bc, const Weights& w) {
            StrictifyingWeight sw = find_strictifying_weight(bc.rows(), w);
            py::dict out;
            out["w"] = sw.w;
            out["roots"] = sw.roots;
            out["min_gap"] = sw.min_gap;
            return out;
        },
        py::arg("bc"), py::arg("weights"));

    m.def(
        "timoshenko_reduction",
        [](double rho, double irho, double shear, double flex, cplx alpha1, cplx alpha2,
           int m) {
            BeamCoefficients c = BeamCoefficients::constant(rho, irho, shear, flex, 0.0, 0.0, m);
            c.alpha1 = alpha1;
            c.alpha2 = alpha2;
            BeamReduction r = build_reduction(c);
            py::dict out;
            out["b1"] = r.b1;
            out["b2"] = r.b2;
            out["h1_end"] = r.h1_end;
            out["h2_end"] = r.h2_end;
            std::vector<std::vector<cplx>> q0(4, std::vector<cplx>(4));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) q0[i][j] = r.q_nodes[0](i, j);
            out["q0"] = q0;
            return out;
        },
        py::arg("rho"), py::arg("irho"), py::arg("shear"), py::arg("flex"),
        py::arg("alpha1"), py::arg("alpha2"), py::arg("m") = 64,
        "Constant-profile beam reduction summary");
}
