#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dilated/cltsys.hpp"
#include "dilated/errors.hpp"
#include "dilated/measure.hpp"
#include "dilated/psd.hpp"
#include "dilated/quantale.hpp"
#include "dilated/serialize.hpp"

namespace py = pybind11;
using namespace dilated;

namespace {

Measure as_measure(const py::object& obj) {
    if (py::isinstance<LatticeMeasure>(obj)) return Measure(obj.cast<LatticeMeasure>());
    if (py::isinstance<GaussianMeasure>(obj)) return Measure(obj.cast<GaussianMeasure>());
    throw ConfigError("expected a LatticeMeasure or GaussianMeasure");
}

py::object from_measure(const Measure& m) {
    if (m.is_lattice()) return py::cast(m.lattice());
    return py::cast(m.gaussian());
}

py::dict report_dict(const ConvergenceReport& r) {
    py::dict d;
    d["kind"] = kind_name(r.kind);
    d["l"] = r.l;
    d["iterations"] = r.iterations;
    d["distance_to_target"] = r.distance_to_target;
    d["successive_distance"] = r.successive_distance;
    d["empirical_ratio"] = r.empirical_ratio;
    d["theoretical_ratio"] = r.theoretical_ratio;
    d["grading_drift"] = r.grading_drift;
    d["verdict"] = verdict_name(r.verdict);
    d["final_measure"] = from_measure(r.final_measure);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantale-valued fixed-point machinery with probabilistic central limits";

    py::register_exception<Error>(m, "DilatedError");

    py::enum_<QuantaleInstance>(m, "QuantaleInstance")
        .value("Boolean", QuantaleInstance::Boolean)
        .value("ExtRealMul", QuantaleInstance::ExtRealMul)
        .value("Lawvere", QuantaleInstance::Lawvere);

    m.def("tensor", py::overload_cast<QuantaleInstance, double, double>(&tensor));
    m.def("residual", py::overload_cast<QuantaleInstance, double, double>(&residual));
    m.def(
        "check_laws",
        [](QuantaleInstance inst, unsigned seed) {
            LawReport r = check_laws(make_quantale(inst), default_samples(inst), seed);
            py::list out;
            for (const auto& law : r.laws) {
                py::dict d;
                d["law"] = law.law;
                d["passed"] = law.passed;
                d["witness"] = law.witness;
                out.append(d);
            }
            return out;
        },
        py::arg("instance"), py::arg("seed") = 42);

    py::class_<PsdMatrix>(m, "PsdMatrix")
        .def(py::init<std::size_t, std::vector<double>>(), py::arg("order"), py::arg("entries"))
        .def_static("identity", &PsdMatrix::identity)
        .def_static("diagonal", &PsdMatrix::diagonal)
        .def_property_readonly("order", &PsdMatrix::order)
        .def_property_readonly("entries", &PsdMatrix::entries)
        .def("trace", &PsdMatrix::trace)
        .def("__getitem__", [](const PsdMatrix& a, std::pair<std::size_t, std::size_t> ij) {
            return a(ij.first, ij.second);
        });

    m.def("sqrt_psd", &sqrt_psd);
    m.def("bures_wasserstein", &bures_wasserstein);
    m.def("psd_pushforward", &psd_pushforward, py::arg("f"), py::arg("rows"), py::arg("m"));
    m.def("psd_dilate", &psd_dilate);
    m.def("block_diag", &block_diag);

    py::class_<LatticeMeasure>(m, "LatticeMeasure")
        .def(py::init([](int dim, std::vector<double> spacing, std::vector<double> offset,
                         std::vector<std::size_t> shape, std::vector<double> weights) {
                 LatticeMeasure lm{dim, std::move(spacing), std::move(offset), std::move(shape),
                                   std::move(weights)};
                 lm.validate();
                 return lm;
             }),
             py::arg("dim"), py::arg("spacing"), py::arg("offset"), py::arg("shape"),
             py::arg("weights"))
        .def_readonly("dim", &LatticeMeasure::dim)
        .def_readonly("spacing", &LatticeMeasure::spacing)
        .def_readonly("offset", &LatticeMeasure::offset)
        .def_readonly("shape", &LatticeMeasure::shape)
        .def_readonly("weights", &LatticeMeasure::weights);

    py::class_<GaussianMeasure>(m, "GaussianMeasure")
        .def(py::init([](std::vector<double> mean, PsdMatrix cov) {
                 return GaussianMeasure{std::move(mean), std::move(cov)};
             }),
             py::arg("mean"), py::arg("covariance"))
        .def_readonly("mean", &GaussianMeasure::mean)
        .def_readonly("covariance", &GaussianMeasure::covariance);

    m.def("dirac", &dirac);
    m.def("rademacher", &rademacher);
    m.def("bernoulli", &bernoulli);
    m.def("uniform_lattice", &uniform_lattice);
    m.def("product", &product);

    m.def("char_fn", [](const py::object& mu, std::vector<double> t) {
        return char_fn(as_measure(mu), t);
    });
    m.def("convolve", &convolve);
    m.def("dilate", [](double c, const py::object& mu) { return from_measure(dilate(c, as_measure(mu))); });
    m.def("pushforward_linear", [](std::vector<double> f, std::size_t rows, const py::object& mu) {
        return from_measure(pushforward_linear(f, rows, as_measure(mu)));
    });
    m.def("expectation", [](const py::object& mu) { return expectation(as_measure(mu)); });
    m.def("variance_matrix", [](const py::object& mu) { return variance_matrix(as_measure(mu)); });
    m.def("abs_moment", [](const py::object& mu, double l) { return abs_moment(as_measure(mu), l); });

    py::class_<DualGrid>(m, "DualGrid")
        .def_static("make", &DualGrid::make, py::arg("dim"), py::arg("r_min") = 1e-2,
                    py::arg("r_max") = 1e2, py::arg("n_radii") = 64, py::arg("extra_dirs") = 14,
                    py::arg("seed") = 42)
        .def_readwrite("threads", &DualGrid::threads);

    m.def("fourier_l_distance", [](const py::object& mu, const py::object& nu, double l,
                                   const DualGrid& grid) {
        return fourier_l_distance(as_measure(mu), as_measure(nu), l, grid);
    });
    m.def(
        "fourier_distance",
        [](const py::object& mu, const py::object& nu, double l) {
            Measure a = as_measure(mu);
            return fourier_l_distance(a, as_measure(nu), l, DualGrid::make(a.dim()));
        },
        py::arg("mu"), py::arg("nu"), py::arg("l"));

    py::enum_<Kind>(m, "Kind").value("LLN", Kind::LLN).value("CLT", Kind::CLT);

    py::class_<CltSystem>(m, "CltSystem")
        .def_static(
            "make",
            [](Kind kind, double l, int dim) { return CltSystem::make(kind, l, DualGrid::make(dim)); },
            py::arg("kind"), py::arg("l"), py::arg("dim") = 1)
        .def_readonly("kind", &CltSystem::kind)
        .def_readonly("l", &CltSystem::l)
        .def_readonly("grading_constant", &CltSystem::grading_constant)
        .def_readonly("rescale", &CltSystem::rescale);

    m.def("theta", [](const CltSystem& sys, const py::object& mu) {
        return from_measure(theta(sys, as_measure(mu)));
    });
    m.def("theoretical_ratio", &theoretical_ratio);
    m.def(
        "central_limit",
        [](const CltSystem& sys, const py::object& mu0, int max_iter, double target_tol) {
            CentralLimitOptions opts;
            opts.target_tol = target_tol;
            return report_dict(central_limit(sys, as_measure(mu0), max_iter, opts));
        },
        py::arg("sys"), py::arg("mu0"), py::arg("max_iter") = 20, py::arg("target_tol") = 0.02);
    m.def(
        "observable_clt",
        [](const std::function<double()>& sampler, const std::function<double(double)>& H,
           std::size_t n_samples, std::size_t n_bins, const CltSystem& sys, int max_iter) {
            return report_dict(observable_clt(sampler, H, n_samples, n_bins, sys, max_iter));
        },
        py::arg("sampler"), py::arg("H"), py::arg("n_samples"), py::arg("n_bins"), py::arg("sys"),
        py::arg("max_iter") = 15);
}
