#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "beampencil/config.hpp"
#include "beampencil/verify.hpp"

using namespace beampencil;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string emit_dir;
};

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write '" + out + "'");
  f << text;
}

void emit_eigenfunction(SpectralStudy& s, int index, const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const std::string name = to_string(s.spec().bc) + "_lambda_" + std::to_string(index) + ".csv";
  write_eigenfunction_csv(s.eigenfunction(index), (std::filesystem::path(dir) / name).string());
}

json base_doc(const SpectralStudy& s) {
  json doc;
  doc["meta"] = study_meta(s);
  return doc;
}

int cmd_spectrum(const Common& o) {
  const ParsedConfig cfg = load_problem(o.config);
  SpectralStudy s(cfg.spec, cfg.mesh, cfg.options);
  json doc = base_doc(s);
  doc["spectrum"] = spectrum_json(s.spectrum());
  if (!o.emit_dir.empty()) {
    const Spectrum& sp = s.spectrum();
    for (std::size_t k = 0; k < sp.converged_negatives; ++k)
      emit_eigenfunction(s, -static_cast<int>(k + 1), o.emit_dir);
    for (std::size_t k = 0; k < std::min<std::size_t>(sp.converged_positives, 5); ++k)
      emit_eigenfunction(s, static_cast<int>(k + 1), o.emit_dir);
  }
  emit(doc, o.out);
  return 0;
}

int cmd_inertia(const Common& o, double lambda) {
  const ParsedConfig cfg = load_problem(o.config);
  SpectralStudy s(cfg.spec, cfg.mesh, cfg.options);
  const InertiaResult r = inertia_index(s.pencil(), lambda, s.tol());
  json doc = base_doc(s);
  doc["lambda"] = lambda;
  doc["ind"] = r.index;
  doc["near_singular"] = r.near_singular;
  doc["tau"] = r.tau;
  doc["min_abs_eigenvalue"] = r.min_abs_eigenvalue;
  emit(doc, o.out);
  return 0;
}

int cmd_admissible(const Common& o) {
  const ParsedConfig cfg = load_problem(o.config);
  SpectralStudy s(cfg.spec, cfg.mesh, cfg.options);
  const AdmissibleSet& a = s.admissible();
  json doc = base_doc(s);
  doc["sup_lambda"] = a.sup_lambda;
  doc["n_elements"] = a.n_elements;
  doc["drift"] = a.drift;
  emit(doc, o.out);
  return 0;
}

int cmd_transform(const Common& o, double lambda) {
  const ParsedConfig cfg = load_problem(o.config);
  SpectralStudy s(cfg.spec, cfg.mesh, cfg.options);
  const SigmaProfile profile = sigma_solution(cfg.spec.p, lambda, s.admissible(), s.tol());
  const ModelProblem model = transform_pencil(cfg.spec, profile);
  const TheoremEntry check = verify_transform(s, lambda);

  json ts = json::array(), ph = json::array(), rh = json::array();
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    ts.push_back(t);
    ph.push_back(model.p_hat(t));
    rh.push_back(model.r_hat(t));
  }
  json doc = base_doc(s);
  doc["lambda"] = lambda;
  doc["sup_lambda"] = s.admissible().sup_lambda;
  doc["gauge"] = SigmaProfile::gauge;
  doc["omega"] = profile.omega();
  doc["sigma_min"] = profile.min_sigma();
  doc["sigma_ode_residual"] = profile.ode_residual();
  doc["alpha_term"] = model.alpha_term;
  doc["t"] = std::move(ts);
  doc["p_hat"] = std::move(ph);
  doc["r_hat"] = std::move(rh);
  doc["check"] = {{"status", to_string(check.status)}, {"witness", check.witness}};
  emit(doc, o.out);
  return check.status == Status::Fail ? 2 : 0;
}

int cmd_oscillation(const Common& o, int index) {
  const ParsedConfig cfg = load_problem(o.config);
  SpectralStudy s(cfg.spec, cfg.mesh, cfg.options);
  if (index == 0 || !s.spectrum().has(index))
    throw ConfigError("no eigenvalue with index " + std::to_string(index));
  const EigenfunctionSample& fn = s.eigenfunction(index);
  const ZeroReport z = locate_zeros(fn, s.tol().value_tol, s.tol().deriv_tol);
  json doc = base_doc(s);
  doc["index"] = index;
  doc["lambda"] = fn.lambda;
  doc["zero_report"] = zero_report_json(z);
  doc["strong_residual"] = fn.strong_residual;
  if (fn.natural_defect) doc["natural_defect"] = *fn.natural_defect;
  if (fn.natural_defect_element) doc["natural_defect_element"] = *fn.natural_defect_element;
  emit_eigenfunction(s, index, o.emit_dir);
  emit(doc, o.out);
  return 0;
}

int cmd_verify(const Common& o, bool pair) {
  const ParsedConfig cfg = load_problem(o.config);
  const TheoremReport report = run_verify(cfg, pair);
  if (!o.emit_dir.empty()) {
    std::vector<BoundaryKind> kinds = {cfg.spec.bc};
    if (pair) kinds = {BoundaryKind::ClampedClamped, BoundaryKind::ClampedMassEnd};
    for (BoundaryKind bc : kinds) {
      SpectralStudy s(cfg.spec.with_boundary(bc), cfg.mesh, cfg.options);
      for (std::size_t k = 0; k < std::min<std::size_t>(s.spectrum().converged_negatives, 5); ++k)
        emit_eigenfunction(s, -static_cast<int>(k + 1), o.emit_dir);
    }
  }
  emit(report.to_json(), o.out);
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of the beam pencil (p y'')'' = lambda (-y'' + c r y)"};
  app.require_subcommand(1);

  Common o;
  double lambda = 0.0;
  int index = 0;
  bool pair = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", o.config, "problem configuration (JSON)")->required();
    sub->add_option("--out", o.out, "write JSON here instead of stdout");
  };
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues with convergence flags");
  add_common(spectrum);
  spectrum->add_option("--emit-eigenfunctions", o.emit_dir, "write x,y,dy,ddy CSVs to this directory");
  auto* inertia = app.add_subcommand("inertia", "negative index of T(lambda)");
  add_common(inertia);
  inertia->add_option("--lambda", lambda)->required();
  auto* admissible = app.add_subcommand("admissible", "upper end of the admissible set");
  add_common(admissible);
  auto* transform = app.add_subcommand("transform", "change of variables at lambda");
  add_common(transform);
  transform->add_option("--lambda", lambda)->required();
  auto* oscillation = app.add_subcommand("oscillation", "zeros of one eigenfunction");
  add_common(oscillation);
  oscillation->add_option("--index", index, "signed eigenvalue index (-n or +n)")->required();
  oscillation->add_option("--emit-eigenfunctions", o.emit_dir, "write the CSV to this directory");
  auto* verify = app.add_subcommand("verify", "run every theorem check");
  add_common(verify);
  verify->add_flag("--pair", pair, "solve both boundary families and check interlacing");
  verify->add_option("--emit-eigenfunctions", o.emit_dir, "write CSVs to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*inertia) return cmd_inertia(o, lambda);
    if (*admissible) return cmd_admissible(o);
    if (*transform) return cmd_transform(o, lambda);
    if (*oscillation) return cmd_oscillation(o, index);
    if (*verify) return cmd_verify(o, pair);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
