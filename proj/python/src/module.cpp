#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bvtrace/cli.hpp"
#include "bvtrace/correlation.hpp"
#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/qmod.hpp"
#include "bvtrace/vertex.hpp"

namespace py = pybind11;
using namespace bvtrace;

namespace {

// Rationals cross the boundary as (numerator, denominator) strings; the
// Python side turns them into fractions.Fraction.
using RationalPair = std::pair<std::string, std::string>;

RationalPair pair(const Rational& r) { return {r.numerator_string(), r.denominator_string()}; }

std::vector<RationalPair> pairs(const std::vector<Rational>& v) {
  std::vector<RationalPair> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(pair(r));
  return out;
}

GeneratorSetPtr generators(const std::string& system) {
  if (system == "beta_gamma") return GeneratorSet::beta_gamma();
  if (system == "bc") return GeneratorSet::bc();
  if (system == "beta_gamma_bc") return GeneratorSet::beta_gamma_bc();
  throw DomainError("unknown free-field system '" + system + "' (known: beta_gamma, bc, beta_gamma_bc)");
}

FockSystem fock_system(const std::string& system) {
  if (system == "bc") return FockSystem::bc;
  if (system == "beta_gamma") return FockSystem::beta_gamma;
  throw DomainError("unknown Fock system '" + system + "' (known: bc, beta_gamma)");
}

}  // namespace

PYBIND11_MODULE(_bvtrace, m) {
  m.doc() = "Exact BV-quantization engine";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const DomainError& e) {
      domain_error(e.what());
    }
  });

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        CliOutput r;
        {
          py::gil_scoped_release release;
          r = run_cli(args);
        }
        return py::make_tuple(r.exit_code, r.out, r.err);
      },
      py::arg("args"), "Runs a bvtrace command line; returns (exit_code, stdout, stderr).");

  m.def(
      "star",
      [](const std::string& a, const std::string& b, int n, int order) {
        if (n <= 0) n = std::max(infer_weyl_n(a), infer_weyl_n(b));
        auto pi = PoissonTensor::standard(n);
        return moyal_star(parse_weyl(a, n, order), parse_weyl(b, n, order), pi).to_string();
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 0, py::arg("order") = 8);

  m.def(
      "bracket",
      [](const std::string& a, const std::string& b, int n, int order) {
        if (n <= 0) n = std::max(infer_weyl_n(a), infer_weyl_n(b));
        auto pi = PoissonTensor::standard(n);
        return star_commutator(parse_weyl(a, n, order), parse_weyl(b, n, order), pi).to_string();
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 0, py::arg("order") = 8);

  m.def(
      "trace",
      [](const std::string& chain, int n, int order) {
        if (n <= 0) n = infer_weyl_n(chain);
        return trace(parse_periodic(chain, n, order), PoissonTensor::standard(n)).to_string();
      },
      py::arg("chain"), py::arg("n") = 0, py::arg("order") = 8);

  m.def("wheel", [](int k) { return pair(wheel_integral(k)); }, py::arg("k"));
  m.def("a_hat", [](int order) { return pairs(a_hat_factor(order)); }, py::arg("order"));
  m.def("eisenstein", [](int k, int n) { return pairs(eisenstein(k, n).coeffs()); }, py::arg("k"), py::arg("n"));
  m.def(
      "fock_character",
      [](const std::string& system, int level) { return pairs(fock_character({fock_system(system), level}).coeffs()); },
      py::arg("system"), py::arg("level"));

  m.def(
      "ope",
      [](const std::string& a, const std::string& b, const std::string& system, int order) {
        auto gens = generators(system);
        auto e = ope_singular(parse_vertex(a, gens, order), parse_vertex(b, gens, order));
        std::map<int, std::string> poles;
        for (const auto& [n, v] : e.poles) poles[n + 1] = v.to_string();
        return poles;
      },
      py::arg("a"), py::arg("b"), py::arg("system") = "beta_gamma_bc", py::arg("order") = 8,
      "Singular part as {pole order: coefficient}.");

  m.def(
      "qme",
      [](const std::string& gamma, const std::string& system, int order) {
        auto r = qme_check(parse_vertex(gamma, generators(system), order));
        py::dict d;
        d["bracket"] = r.bracket.to_string();
        d["zero"] = r.zero;
        d["vacuous"] = r.vacuous;
        return d;
      },
      py::arg("gamma"), py::arg("system") = "beta_gamma_bc", py::arg("order") = 8);

  m.def(
      "recognize",
      [](const std::string& series, int weight, int n) {
        auto r = recognize(parse_qseries(series, n), weight);
        py::dict d;
        d["success"] = r.success;
        if (r.success)
          d["form"] = r.form.to_string();
        else
          d["residual"] = r.residual.to_string();
        return d;
      },
      py::arg("series"), py::arg("weight"), py::arg("n") = 30);
}
