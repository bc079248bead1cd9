// Python module: fields as numpy coefficient arrays, projectors, operators,
// basis, scenarios and verification suites.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "torusns/advection.hpp"
#include "torusns/basis.hpp"
#include "torusns/errors.hpp"
#include "torusns/galerkin.hpp"
#include "torusns/helmholtz.hpp"
#include "torusns/random.hpp"
#include "torusns/scenario.hpp"
#include "torusns/spectral.hpp"
#include "torusns/verify.hpp"
#include "torusns/viscosity.hpp"

namespace py = pybind11;
using namespace torusns;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

/// Coefficients as an array of shape (2K+1,)*n + (components,), axis d indexing xi_d + K.
ComplexArray to_numpy(const FourierField& f) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(f.dimension()), f.lattice().width());
  shape.push_back(f.components());
  ComplexArray out(shape);
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

FourierField from_numpy(const ComplexArray& a) {
  if (a.ndim() < 2) throw py::value_error("expected shape (2K+1,)*n + (components,)");
  const int n = static_cast<int>(a.ndim()) - 1;
  const auto width = a.shape(0);
  for (int d = 0; d < n; ++d)
    if (a.shape(d) != width || width % 2 == 0) throw py::value_error("every lattice axis must have odd length 2K+1");
  FourierField f(Lattice(n, static_cast<int>(width / 2)), static_cast<int>(a.shape(n)));
  std::copy(a.data(), a.data() + a.size(), f.data().begin());
  return f;
}

}  // namespace

PYBIND11_MODULE(_torusns, m) {
  m.doc() = "Spectral Faedo-Galerkin solver for anisotropic Navier-Stokes on the torus";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<EllipticityViolation>(m, "EllipticityViolation", PyExc_ValueError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);
  py::register_exception<StepSizeUnderflow>(m, "StepSizeUnderflow", PyExc_RuntimeError);

  py::class_<FourierField>(m, "Field")
      .def(py::init([](int n, int K, int components) { return FourierField(Lattice(n, K), components); }),
           py::arg("n"), py::arg("K"), py::arg("components"))
      .def_static("from_coefficients", &from_numpy, py::arg("coefficients"))
      .def_property_readonly("dimension", &FourierField::dimension)
      .def_property_readonly("cutoff", [](const FourierField& f) { return f.lattice().cutoff(); })
      .def_property_readonly("components", &FourierField::components)
      .def("coefficients", &to_numpy)
      .def("divergence_defect", &FourierField::divergence_defect)
      .def("hermitian_defect", &FourierField::hermitian_defect)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def("__mul__", [](FourierField f, double s) { return f *= s; })
      .def("__repr__", [](const FourierField& f) {
        return "<Field n=" + std::to_string(f.dimension()) + " K=" + std::to_string(f.lattice().cutoff()) +
               " components=" + std::to_string(f.components()) + ">";
      });

  m.def(
      "random_field",
      [](int n, int K, int components, std::uint64_t seed, bool solenoidal, bool dotted, double decay) {
        RandomFieldOptions o;
        o.solenoidal = solenoidal;
        o.dotted = dotted;
        o.decay = decay;
        return random_field(Lattice(n, K), components, seed, o);
      },
      py::arg("n"), py::arg("K"), py::arg("components"), py::arg("seed"), py::arg("solenoidal") = false,
      py::arg("dotted") = true, py::arg("decay") = 1.0);
  m.def("to_physical", [](const FourierField& f, int N) {
    const auto g = to_physical(f, N);
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dimension), N);
    shape.push_back(g.components);
    py::array_t<double> out(shape);
    std::copy(g.values.begin(), g.values.end(), out.mutable_data());
    return out;
  });

  m.def("sobolev_norm", &sobolev_norm, py::arg("field"), py::arg("s"));
  m.def("inner_product", &inner_product, py::arg("g"), py::arg("f"), py::arg("s"));
  m.def("dual_product", &dual_product);
  m.def("bessel_potential", &bessel_potential, py::arg("field"), py::arg("r"));
  m.def("grad", &grad);
  m.def("div", [](const FourierField& v) { return torusns::div(v); });
  m.def("laplacian", &laplacian);
  m.def("sym_gradient", &sym_gradient);
  m.def("project_grad", &project_grad);
  m.def("project_sigma", &project_sigma);
  m.def("solve_div", &solve_div);
  m.def("solve_grad", &solve_grad, py::arg("F"), py::arg("s") = 0.0);

  py::enum_<AdvectionMethod>(m, "AdvectionMethod")
      .value("pseudospectral", AdvectionMethod::pseudospectral)
      .value("convolution", AdvectionMethod::convolution);
  m.def("advect", &advect, py::arg("v1"), py::arg("v2"), py::arg("method") = AdvectionMethod::pseudospectral);
  m.def("trilinear", &trilinear, py::arg("v1"), py::arg("v2"), py::arg("v3"),
        py::arg("method") = AdvectionMethod::pseudospectral);

  py::class_<ViscosityTensor>(m, "ViscosityTensor")
      .def_property_readonly("dimension", &ViscosityTensor::dimension)
      .def_property_readonly("description", &ViscosityTensor::description)
      .def("evaluate", [](const ViscosityTensor& A, std::vector<double> x, double t) { return A.evaluate(x, t); });
  m.def("parse_tensor", &parse_tensor, py::arg("spec"), py::arg("n"));
  m.def("apply_L", py::overload_cast<const ViscosityTensor&, const FourierField&, double>(&apply_L));
  m.def("bilinear_form",
        py::overload_cast<const ViscosityTensor&, const FourierField&, const FourierField&, double>(&bilinear_form));
  m.def("korn_check", [](const FourierField& v) {
    const auto k = korn_check(v);
    return py::make_tuple(k.lhs, k.rhs);
  });
  m.def(
      "certify",
      [](const ViscosityTensor& A, int K, double T) {
        const auto c = certify(A, K, T);
        py::dict d;
        d["C_A"] = c.c_a;
        d["mu_min"] = c.mu_min;
        d["tensor_norm"] = c.tensor_norm;
        d["samples"] = c.sample_count;
        return d;
      },
      py::arg("tensor"), py::arg("K"), py::arg("T") = 0.0);

  py::class_<GalerkinBasis, std::shared_ptr<GalerkinBasis>>(m, "GalerkinBasis")
      .def(py::init<int, int>(), py::arg("n"), py::arg("K"))
      .def("__len__", &GalerkinBasis::size)
      .def("field", py::overload_cast<std::size_t>(&GalerkinBasis::field, py::const_))
      .def("eigenvalue", [](const GalerkinBasis& b, std::size_t j) { return b.entry(j).eigenvalue; })
      .def("wavevector", [](const GalerkinBasis& b, std::size_t j) { return b.entry(j).eta; })
      .def("coefficients", &GalerkinBasis::coefficients, py::arg("u"), py::arg("m"))
      .def("synthesize", [](const GalerkinBasis& b, std::vector<double> c) { return b.synthesize(c); })
      .def("to_json", &GalerkinBasis::to_json);
  m.def("project_Pm", &project_Pm, py::arg("u"), py::arg("basis"), py::arg("m"));

  m.def(
      "describe",
      [](const std::map<std::string, std::string>& settings) {
        ScenarioConfig c;
        for (const auto& [k, v] : settings) apply_setting(c, k, v);
        return description_json(describe(build_scenario(c)));
      },
      py::arg("settings") = std::map<std::string, std::string>{},
      "JSON summary of a scenario built from key/value settings");
  m.def(
      "run",
      [](const std::map<std::string, std::string>& settings) {
        ScenarioConfig c;
        for (const auto& [k, v] : settings) apply_setting(c, k, v);
        const auto s = build_scenario(c);
        RunSummary r;
        {
          py::gil_scoped_release release;
          r = run_scenario(s);
        }
        py::list times, energies;
        for (const auto& l : r.result.ledger.samples) {
          times.append(l.t);
          energies.append(l.energy);
        }
        py::dict out;
        out["t"] = times;
        out["energy"] = energies;
        out["steps"] = r.result.steps;
        out["diagnostics"] = r.diagnostics;
        out["manifest"] = r.manifest;
        out["b1"] = r.result.ledger.b1;
        out["b2"] = r.result.ledger.b2;
        return out;
      },
      py::arg("settings"), "Integrate a scenario and write its output files");
  m.def("verify_suites", &verify_suite_names);
  m.def("verify", [](const std::string& suite) { return run_verify_suite(suite).json(); }, py::arg("suite"));
}
