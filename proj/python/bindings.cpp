#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssf3/cli_io.hpp"
#include "ssf3/commutator_decomp.hpp"
#include "ssf3/duhamel.hpp"
#include "ssf3/frechet.hpp"
#include "ssf3/ssf_engine.hpp"
#include "ssf3/verify_oracles.hpp"

namespace py = pybind11;
using namespace ssf3;

namespace {

HermitianOperator op(const Matrix& m) { return HermitianOperator(m); }

ScalarFunction fn(const std::string& spec) { return cli::parse_function_spec(spec); }

SchattenP schatten_tag(const std::string& p) {
  if (p == "1") return SchattenP::One;
  if (p == "2") return SchattenP::Two;
  if (p == "3") return SchattenP::Three;
  if (p == "op") return SchattenP::Op;
  throw PreconditionError("schatten p must be '1', '2', '3' or 'op'");
}

}  // namespace

PYBIND11_MODULE(_ssf3, m) {
  m.doc() = "Taylor remainders of Hermitian matrix functions and third-order spectral shift densities";

  auto base = py::register_exception<Error>(m, "SsfError");
  auto pre = py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NonHermitianError>(m, "NonHermitianError", pre.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def("eig", [](const Matrix& a) {
    const SpectralDecomposition d = spectral::eig(op(a));
    return py::make_tuple(d.eigenvalues, d.eigenvectors);
  }, py::arg("a"), "Ascending eigenvalues and phase-fixed orthonormal eigenvectors.");

  m.def("apply_function", [](const std::string& phi, const Matrix& a) {
    return spectral::apply_function(fn(phi), op(a)).matrix();
  }, py::arg("phi"), py::arg("a"));

  m.def("schatten_norm", [](const Matrix& x, const std::string& p) {
    return spectral::schatten_norm(x, schatten_tag(p));
  }, py::arg("x"), py::arg("p") = "2");

  m.def("d1_poly", [](const Matrix& a, const Matrix& x, int r) {
    return frechet::d1_poly(op(a), x, r);
  }, py::arg("a"), py::arg("x"), py::arg("r"));
  m.def("d2_poly", [](const Matrix& a, const Matrix& x, const Matrix& y, int r) {
    return frechet::d2_poly(op(a), x, y, r);
  }, py::arg("a"), py::arg("x"), py::arg("y"), py::arg("r"));
  m.def("d1_divdiff", [](const std::string& phi, const Matrix& a, const Matrix& x) {
    return frechet::d1_divdiff(fn(phi), spectral::eig(op(a)), x);
  }, py::arg("phi"), py::arg("a"), py::arg("x"));
  m.def("d2_divdiff", [](const std::string& phi, const Matrix& a, const Matrix& x, const Matrix& y) {
    return frechet::d2_divdiff(fn(phi), spectral::eig(op(a)), x, y);
  }, py::arg("phi"), py::arg("a"), py::arg("x"), py::arg("y"));
  m.def("d1_fourier", [](const std::string& phi, const Matrix& a, const Matrix& x) {
    return duhamel::d1_fourier(FourierFunction::from_scalar(fn(phi)), op(a), x);
  }, py::arg("phi"), py::arg("a"), py::arg("x"));
  m.def("d2_fourier", [](const std::string& phi, const Matrix& a, const Matrix& x, const Matrix& y) {
    return duhamel::d2_fourier(FourierFunction::from_scalar(fn(phi)), op(a), x, y);
  }, py::arg("phi"), py::arg("a"), py::arg("x"), py::arg("y"));

  m.def("remainder_trace", [](const std::string& phi, const Matrix& a, const Matrix& v, int order) {
    return frechet::remainder_trace(fn(phi), op(a), op(v), order);
  }, py::arg("phi"), py::arg("a"), py::arg("v"), py::arg("order") = 3);
  m.def("remainder_simplex_poly", [](const Matrix& a, const Matrix& v, int r, int quad_order) {
    return frechet::remainder_simplex_poly(op(a), op(v), r, quad_order).value;
  }, py::arg("a"), py::arg("v"), py::arg("r"), py::arg("quad_order") = 32);
  m.def("remainder_fourier", [](const std::string& phi, const Matrix& a, const Matrix& v) {
    const FourierRemainder r =
        duhamel::remainder_fourier(FourierFunction::from_scalar(fn(phi)), op(a), op(v));
    py::dict d;
    d["value"] = r.value;
    d["half_order_value"] = r.half_order_value;
    d["imag_residue"] = r.imag_residue;
    d["converged"] = r.converged;
    return d;
  }, py::arg("phi"), py::arg("a"), py::arg("v"));

  m.def("support_bounds", [](const Matrix& a, const Matrix& v) {
    const SupportInterval s = ssf::support_bounds(op(a), op(v));
    return py::make_tuple(s.a, s.b);
  }, py::arg("a"), py::arg("v"));
  m.def("tent_kernel", &ssf::tent_kernel, py::arg("x"), py::arg("lam"), py::arg("mu"));

  py::class_<EtaDensity>(m, "EtaDensity")
      .def_readonly("grid", &EtaDensity::grid)
      .def_readonly("values", &EtaDensity::values)
      .def_property_readonly("support",
                             [](const EtaDensity& e) { return py::make_tuple(e.support.a, e.support.b); })
      .def_property_readonly("converged", [](const EtaDensity& e) { return e.convergence.converged; })
      .def("moment", &ssf::eta_moment, py::arg("k"))
      .def("l1_norm", &ssf::l1_norm)
      .def("integrate_third_derivative", [](const EtaDensity& e, const std::string& phi) {
        return ssf::integrate_third_derivative(e, fn(phi));
      }, py::arg("phi"))
      .def("__call__", &EtaDensity::operator(), py::arg("x"));

  m.def("eta_density", [](const Matrix& a, const Matrix& v, int grid_size, int quad_order, double tol) {
    EtaOptions o;
    o.grid_size = grid_size;
    o.quad_order = quad_order;
    o.tol = tol;
    return ssf::eta_density(op(a), op(v), o);
  }, py::arg("a"), py::arg("v"), py::arg("grid_size") = 1001, py::arg("quad_order") = 64,
     py::arg("tol") = 1e-6);
  m.def("eta_moment", &ssf::eta_moment, py::arg("eta"), py::arg("k"));
  m.def("trace_formula_residual", [](const Matrix& a, const Matrix& v, const std::string& phi,
                                     const EtaDensity& eta) {
    const TraceFormulaResidual r = ssf::trace_formula_residual(op(a), op(v), fn(phi), eta);
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["residual"] = r.residual;
    return d;
  }, py::arg("a"), py::arg("v"), py::arg("phi"), py::arg("eta"));

  m.def("pinch", [](const Matrix& b, const Matrix& x, double tol) {
    const PinchDecomposition p = commutator::pinch(spectral::eig(op(b)), x, tol);
    return py::make_tuple(p.v1, p.v2);
  }, py::arg("b"), py::arg("x"), py::arg("tol") = commutator::kDefaultGroupingTol);
  m.def("resolvent_pinch", [](const Matrix& a, const Matrix& x, double tol) {
    const PinchDecomposition p = commutator::resolvent_pinch(op(a), x, tol);
    return py::make_tuple(p.v1, p.v2);
  }, py::arg("a"), py::arg("x"), py::arg("tol") = commutator::kDefaultGroupingTol);

  m.def("palindrome_sum_identity", [](const std::vector<long long>& a) {
    const auto r = oracle::palindrome_sum_identity(a);
    return py::make_tuple(r.lhs, r.rhs, r.equal);
  }, py::arg("a"));
  m.def("parse_function_spec", [](const std::string& s) { return fn(s).describe(); },
        py::arg("spec"), "Canonical form of a function spec; raises ParseError.");
  m.def("random_instance", [](std::uint64_t seed, Eigen::Index n, double v_norm) {
    const RandomInstance r = oracle::random_instance(seed, n, v_norm);
    return py::make_tuple(r.a.matrix(), r.v.matrix());
  }, py::arg("seed"), py::arg("n"), py::arg("v_norm") = 1.0);
}
