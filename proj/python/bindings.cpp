#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beampencil/config.hpp"
#include "beampencil/verify.hpp"

namespace py = pybind11;
using namespace beampencil;

namespace {

CoefficientField field_from(const py::object& obj, const std::string& name) {
  if (py::isinstance<py::float_>(obj) || py::isinstance<py::int_>(obj))
    return CoefficientField::constant(obj.cast<double>());
  return parse_coefficient(obj.cast<std::string>(), name);
}

ConeDirection direction_from(const std::string& s) {
  if (s == "forward") return ConeDirection::Forward;
  if (s == "backward") return ConeDirection::Backward;
  throw ConfigError("direction must be 'forward' or 'backward'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral analysis of the beam pencil (p y'')'' = lambda (-y'' + c r y)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "spectrum_json",
      [](const std::string& config) {
        const ParsedConfig cfg = parse_problem(config);
        SpectralStudy s(cfg.spec, cfg.mesh, cfg.options);
        nlohmann::ordered_json doc;
        doc["meta"] = study_meta(s);
        doc["spectrum"] = spectrum_json(s.spectrum());
        return doc.dump();
      },
      py::arg("config"), "Spectrum of a JSON configuration, as a JSON document.");

  m.def(
      "inertia",
      [](const std::string& config, double lambda) {
        const ParsedConfig cfg = parse_problem(config);
        return inertia_index(assemble_pencil(cfg.spec, cfg.mesh), lambda, cfg.options.tol).index;
      },
      py::arg("config"), py::arg("lam"));

  m.def(
      "admissible_sup",
      [](const py::object& p, std::size_t n_elements) {
        return admissible_sup(field_from(p, "p").certified_positive("p"), Mesh::uniform(n_elements))
            .sup_lambda;
      },
      py::arg("p"), py::arg("n_elements") = 128);

  m.def(
      "sl_negative_count",
      [](const std::string& config) {
        const ParsedConfig cfg = parse_problem(config);
        return sl_negative_count(cfg.spec, cfg.mesh, cfg.options.tol).count;
      },
      py::arg("config"));

  m.def(
      "verify_json",
      [](const std::string& config, bool pair, bool with_timings) {
        return run_verify(parse_problem(config), pair).to_json(with_timings).dump();
      },
      py::arg("config"), py::arg("pair") = false, py::arg("with_timings") = true);

  m.def(
      "count_sign_changes",
      [](const std::vector<double>& samples, double value_tol) {
        return count_sign_changes(samples, value_tol).count;
      },
      py::arg("samples"), py::arg("value_tol") = 0.0);

  m.def(
      "disconjugacy_check",
      [](const py::object& p, const py::object& r, double a, std::array<double, 4> q,
         const std::string& direction) {
        const DisconjugacyResult d = disconjugacy_check(
            field_from(p, "p").certified_positive("p"), field_from(r, "r"),
            ConeState{a, q, direction_from(direction)});
        return py::make_tuple(d.end, d.pass);
      },
      py::arg("p"), py::arg("r"), py::arg("a"), py::arg("q"), py::arg("direction") = "forward");

  m.def(
      "signchange_noninc",
      [](const std::string& config, const std::vector<double>& f) {
        const ParsedConfig cfg = parse_problem(config);
        const SignChangeTrial t = signchange_noninc_check(cfg.spec, f, cfg.mesh);
        return py::make_tuple(t.k_in, t.k_out, t.pass);
      },
      py::arg("config"), py::arg("f"));
}
