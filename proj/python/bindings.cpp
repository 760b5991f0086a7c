#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "expanderlab/builtins.hpp"
#include "expanderlab/errors.hpp"
#include "expanderlab/group_table.hpp"
#include "expanderlab/harness.hpp"
#include "expanderlab/number_theory.hpp"
#include "expanderlab/spectral.hpp"
#include "expanderlab/walk.hpp"
#include "expanderlab/words.hpp"

namespace py = pybind11;
using namespace expanderlab;

namespace {

std::vector<RationalMatrix> gens_for(const std::string& builtin, const std::string& gens_path) {
  if (!gens_path.empty()) return parse_generators(gens_path, true).generators;
  return builtin_generators(builtin);
}

py::object fraction(const Rational& r) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(py::int_(py::str(r.get_num().get_str())), py::int_(py::str(r.get_den().get_str())));
}

SpectrumMode mode_of(const std::string& m) {
  if (m == "auto") return SpectrumMode::Auto;
  if (m == "full") return SpectrumMode::Full;
  if (m == "iterative") return SpectrumMode::Iterative;
  throw Error(modules::kCliHarness, ErrorCode::InvalidArgument, "unknown spectrum mode " + m);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cayley-graph expansion experiments for arithmetic groups";
  m.attr("__version__") = std::string(kVersion);

  static py::handle error_type = py::exception<Error>(m, "ExpanderlabError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, (e.qualified_code() + ": " + e.what()).c_str());
    }
  });

  m.def("builtin_names", &builtin_names);
  m.def("is_prime", &is_prime, py::arg("n"));
  m.def("factorize", &factorize, py::arg("n"));

  m.def("ball_size", [](int generators, int length) { return py::int_(py::str(ball_size(generators, length).get_str())); },
        py::arg("generators"), py::arg("length"));
  m.def("kesten_return", [](int generators, int steps) { return fraction(kesten_return(generators, steps)); },
        py::arg("generators"), py::arg("steps"));

  m.def(
      "quotient_order",
      [](uint64_t q, const std::string& builtin, const std::string& gens) {
        return generate_group(gens_for(builtin, gens), q)->order();
      },
      py::arg("q"), py::arg("builtin") = "lubotzky3", py::arg("gens") = "");

  m.def(
      "strong_approximation_scan",
      [](uint64_t p_max, const std::string& builtin, const std::string& gens) {
        const auto scan = strong_approximation_scan(gens_for(builtin, gens), p_max);
        py::dict d;
        d["primes"] = scan.primes;
        d["threshold"] = scan.threshold;
        return d;
      },
      py::arg("p_max"), py::arg("builtin") = "lubotzky3", py::arg("gens") = "");

  m.def(
      "spectrum",
      [](uint64_t q, const std::string& builtin, const std::string& gens, const std::string& mode) {
        SpectrumOptions opt;
        opt.mode = mode_of(mode);
        const auto rep = spectrum(CayleyGraph(generate_group(gens_for(builtin, gens), q)), opt);
        py::dict d;
        d["order"] = rep.order;
        d["degree"] = rep.degree;
        d["complete"] = rep.complete;
        d["eigenvalues"] = rep.eigenvalues;
        d["lambda2"] = rep.lambda2;
        d["lambda_star"] = rep.lambda_star;
        py::list clusters;
        for (const auto& c : rep.clusters) clusters.append(py::make_tuple(c.value, c.multiplicity));
        d["clusters"] = clusters;
        return d;
      },
      py::arg("q"), py::arg("builtin") = "lubotzky3", py::arg("gens") = "", py::arg("mode") = "auto");

  m.def(
      "walk",
      [](uint64_t q, int l_max, const std::string& builtin) {
        py::list out;
        for (const auto& r : walk_table(generate_group(builtin_generators(builtin), q), l_max)) {
          py::dict d;
          d["l"] = r.l;
          d["l2_norm"] = r.l2_norm;
          d["linf"] = r.linf;
          out.append(d);
        }
        return out;
      },
      py::arg("q"), py::arg("l_max"), py::arg("builtin") = "lubotzky3");

  m.def(
      "certify_free",
      [](const std::string& builtin, int max_length) {
        const auto gens = builtin_generators(builtin);
        const auto cert = certify_free(free_basis(gens), max_length);
        py::dict d;
        d["free"] = cert.free;
        d["max_length"] = cert.max_length;
        d["words_checked"] = cert.words_checked;
        d["relation"] = cert.relation ? py::object(py::str(cert.relation->to_string())) : py::object(py::none());
        return d;
      },
      py::arg("builtin"), py::arg("max_length"));

  m.def(
      "structural_suite",
      [](uint32_t p, uint64_t seed) {
        py::list out;
        for (const auto& c : run_structural_suite(p, seed)) out.append(py::make_tuple(c.name, c.pass, c.detail));
        return out;
      },
      py::arg("p"), py::arg("seed") = 1);

  // Same experiments as the command-line tool; returns the parsed JSON report.
  m.def(
      "run",
      [](const std::string& command, py::kwargs kw) {
        ExperimentConfig cfg;
        cfg.command = command;
        for (auto [k, v] : kw) {
          const auto key = py::cast<std::string>(k);
          if (key == "gens") cfg.gens_path = py::cast<std::string>(v);
          else if (key == "builtin") cfg.builtin = py::cast<std::string>(v);
          else if (key == "symmetrize") cfg.symmetrize = py::cast<bool>(v);
          else if (key == "q") cfg.q = py::cast<uint64_t>(v);
          else if (key == "p") cfg.p = py::cast<uint64_t>(v);
          else if (key == "lmax") cfg.l_max = py::cast<int>(v);
          else if (key == "subgroup") cfg.subgroup = py::cast<std::string>(v);
          else if (key == "samples") cfg.samples = py::cast<int>(v);
          else if (key == "set_size") cfg.set_size = py::cast<int>(v);
          else if (key == "seed") cfg.seed = py::cast<uint64_t>(v);
          else if (key == "exact") cfg.exact = py::cast<bool>(v);
          else if (key == "M") cfg.generators_m = py::cast<int>(v);
          else if (key == "mode") cfg.spectrum_mode = py::cast<std::string>(v);
          else throw py::type_error("unknown option " + key);
        }
        const auto res = run_experiment(cfg);
        auto report = py::module_::import("json").attr("loads")(render_json(res.report));
        report["exit_code"] = res.exit_code;
        return report;
      },
      py::arg("command"));
}
