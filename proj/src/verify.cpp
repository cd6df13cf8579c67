#include "beampencil/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

namespace beampencil {

using json = nlohmann::ordered_json;

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skipped:
      return "skipped";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

bool TheoremReport::any_fail() const {
  return std::any_of(theorems.begin(), theorems.end(),
                     [](const TheoremEntry& e) { return e.status == Status::Fail; });
}

json TheoremReport::to_json(bool with_timings) const {
  json out;
  out["meta"] = meta;
  json list = json::array();
  for (const TheoremEntry& e : theorems) {
    json j;
    j["name"] = e.name;
    j["bc"] = beampencil::to_string(e.bc);
    j["status"] = beampencil::to_string(e.status);
    j["hypotheses"] = e.hypotheses;
    j["witness"] = e.witness;
    if (!e.message.empty()) j["message"] = e.message;
    list.push_back(std::move(j));
  }
  out["theorems"] = std::move(list);
  out["exit_code"] = exit_code();
  if (with_timings) out["timings"] = timings;
  return out;
}

SpectralStudy::SpectralStudy(ProblemSpec spec, Mesh mesh, RunOptions options)
    : spec_(std::move(spec)), mesh_(std::move(mesh)), options_(std::move(options)) {
  check_mesh_for(mesh_, spec_.bc);
}

const Spectrum& SpectralStudy::spectrum() {
  if (!spectrum_) spectrum_ = compute_spectrum(spec_, mesh_, tol());
  return *spectrum_;
}

const PencilMatrices& SpectralStudy::pencil() {
  if (!pencil_) pencil_ = assemble_pencil(spec_, mesh_);
  return *pencil_;
}

const AdmissibleSet& SpectralStudy::admissible() {
  if (!admissible_) admissible_ = admissible_sup(spec_.p, mesh_, tol());
  return *admissible_;
}

const SlCount& SpectralStudy::sl_count() {
  if (!sl_) sl_ = sl_negative_count(spec_, mesh_, tol());
  return *sl_;
}

const EigenfunctionSample& SpectralStudy::eigenfunction(int signed_index) {
  for (const auto& [k, fn] : eigenfunctions_)
    if (k == signed_index) return fn;
  eigenfunctions_.emplace_back(
      signed_index, reconstruct_eigenfunction(spectrum(), signed_index, spec_, options_.samples));
  return eigenfunctions_.back().second;
}

namespace {

TheoremEntry entry(const std::string& name, const SpectralStudy& s) {
  TheoremEntry e;
  e.name = name;
  e.bc = s.spec().bc;
  return e;
}

double neighbour_gap(const std::vector<SpectralEntry>& branch, std::size_t k) {
  const double lam = branch[k].lambda;
  double gap = std::numeric_limits<double>::infinity();
  if (k > 0) gap = std::min(gap, std::abs(lam - branch[k - 1].lambda));
  if (k + 1 < branch.size()) gap = std::min(gap, std::abs(lam - branch[k + 1].lambda));
  return gap;
}

std::string hypothesis(const std::string& text, bool met) {
  return text + (met ? "" : " (unmet)");
}

}  // namespace

TheoremEntry verify_simplicity(SpectralStudy& s) {
  TheoremEntry e = entry("negative_simplicity", s);
  const Spectrum& sp = s.spectrum();
  const PencilMatrices& m = s.pencil();
  e.witness["negatives"] = sp.negatives.size();
  e.witness["converged"] = sp.converged_negatives;
  if (sp.negatives.empty()) {
    e.status = Status::Pass;
    e.witness["vacuous"] = true;
    return e;
  }
  if (sp.converged_negatives == 0) {
    e.status = Status::Inconclusive;
    e.message = "no converged negative eigenvalue";
    return e;
  }
  bool ok = true;
  json rows = json::array();
  for (std::size_t k = 0; k < sp.converged_negatives; ++k) {
    const double lam = sp.negatives[k].lambda;
    const double gap = neighbour_gap(sp.negatives, k) / std::abs(lam);
    Eigen::VectorXd sv = energy_eigenvalues(m.A, m.A - lam * m.B).cwiseAbs();
    std::sort(sv.data(), sv.data() + sv.size());
    const double ratio = sv.size() > 1 ? (sv[0] > 0.0 ? sv[1] / sv[0] : INFINITY) : INFINITY;
    const bool row_ok = gap >= s.tol().simplicity_gap_rel && ratio >= s.tol().kernel_ratio;
    ok = ok && row_ok;
    rows.push_back({{"index", -static_cast<int>(k + 1)},
                    {"lambda", lam},
                    {"gap_rel", std::isfinite(gap) ? json(gap) : json(nullptr)},
                    {"sv1", sv[0]},
                    {"sv2", sv.size() > 1 ? sv[1] : 0.0},
                    {"ok", row_ok}});
  }
  e.witness["eigenvalues"] = std::move(rows);
  e.witness["gap_rel_min"] = s.tol().simplicity_gap_rel;
  e.witness["kernel_ratio_min"] = s.tol().kernel_ratio;
  e.status = ok ? Status::Pass : Status::Fail;
  return e;
}

TheoremEntry verify_zero_counts(SpectralStudy& s, std::size_t n_max) {
  TheoremEntry e = entry("zero_counts", s);
  const double c = s.spec().c, alpha = s.spec().alpha;
  e.hypotheses = {hypothesis("c < 0", c < 0.0), hypothesis("alpha <= 0", alpha <= 0.0)};
  if (!(c < 0.0 && alpha <= 0.0)) {
    e.status = Status::Skipped;
    return e;
  }
  const Spectrum& sp = s.spectrum();
  const PencilMatrices& m = s.pencil();
  if (sp.negatives.empty()) {
    e.status = Status::Pass;
    e.witness["vacuous"] = true;
    return e;
  }
  const std::size_t n_top = std::min(n_max, sp.converged_negatives);
  if (n_top == 0) {
    e.status = Status::Inconclusive;
    e.message = "no converged negative eigenvalue";
    return e;
  }

  const Tolerances& tol = s.tol();
  bool ok = true;
  json rows = json::array();
  for (std::size_t n = 1; n <= n_top; ++n) {
    const EigenfunctionSample& fn = s.eigenfunction(-static_cast<int>(n));
    const ZeroReport z = locate_zeros(fn, tol.value_tol, tol.deriv_tol);
    const ZeroReport z_half = locate_zeros(fn, 0.5 * tol.value_tol, tol.deriv_tol);

    const double lam = fn.lambda;
    double delta = 0.25 * neighbour_gap(sp.negatives, n - 1);
    if (!std::isfinite(delta)) delta = 0.25 * std::abs(lam);
    const std::size_t ind_inner = inertia_index(m, lam + delta, tol).index;
    const std::size_t ind_outer = inertia_index(m, lam - delta, tol).index;

    const std::size_t count = z.zeros.size();
    const bool row_ok = count == n - 1 && z.all_simple() && z_half.zeros.size() == count &&
                        z_half.sign_changes == z.sign_changes && ind_inner == count &&
                        ind_outer == count + 1;
    if (!row_ok && e.message.empty()) {
      for (const Zero& zero : z.zeros)
        if (!zero.simple) e.message = "non-simple zero at x=" + std::to_string(zero.x);
      if (e.message.empty())
        e.message = "lambda_-" + std::to_string(n) + ": " + std::to_string(count) +
                    " zeros, expected " + std::to_string(n - 1);
    }
    ok = ok && row_ok;
    json xs = json::array();
    for (const Zero& zero : z.zeros) xs.push_back(zero.x);
    rows.push_back({{"index", -static_cast<int>(n)},
                    {"lambda", lam},
                    {"zeros", count},
                    {"zero_x", std::move(xs)},
                    {"all_simple", z.all_simple()},
                    {"sign_changes", z.sign_changes},
                    {"zeros_half_tol", z_half.zeros.size()},
                    {"ind_inner", ind_inner},
                    {"ind_outer", ind_outer},
                    {"ok", row_ok}});
  }
  e.witness["eigenfunctions"] = std::move(rows);
  e.witness["value_tol"] = tol.value_tol;
  e.witness["deriv_tol"] = tol.deriv_tol;
  e.status = ok ? Status::Pass : Status::Fail;
  return e;
}

TheoremEntry verify_negative_count(SpectralStudy& s) {
  TheoremEntry e = entry("negative_count", s);
  const Spectrum& sp = s.spectrum();
  const std::size_t count = sp.negatives.size();
  const double window = count > 0 ? 2.0 * sp.negatives.back().lambda : -1.0;
  const std::size_t window_index = inertia_index(s.pencil(), window, s.tol()).index;
  const SlCount& sl = s.sl_count();

  e.witness["pencil_count"] = count;
  e.witness["refined_count"] = sp.refined_negatives;
  e.witness["converged"] = sp.converged_negatives;
  e.witness["window_lambda"] = window;
  e.witness["window_index"] = window_index;
  e.witness["sl_count"] = sl.count;
  e.witness["sl_negative_eigenvalues"] = sl.negative_eigenvalues;

  const bool stable = sp.refined_negatives == static_cast<long>(count) && window_index == count;
  if (!stable) {
    e.status = Status::Inconclusive;
    e.message = "pencil count not stable under mesh doubling or window extension";
    return e;
  }
  e.status = count == sl.count ? Status::Pass : Status::Fail;
  return e;
}

TheoremEntry verify_interlacing(SpectralStudy& clamped, SpectralStudy& mass_end) {
  TheoremEntry e = entry("interlacing", clamped);
  const double c = clamped.spec().c, alpha = clamped.spec().alpha;
  const double rel = clamped.tol().interlacing_gap_rel;
  const Spectrum& cc = clamped.spectrum();
  const Spectrum& me = mass_end.spectrum();

  bool ok = true;
  json rows = json::array();
  const std::size_t common = std::min(cc.converged_negatives, me.converged_negatives);
  for (std::size_t k = 0; k < common; ++k) {
    const double lam = cc.negatives[k].lambda, lam_me = me.negatives[k].lambda;
    const double upper = (lam_me - lam) / std::abs(lam);  // lambda_-n < lambda'_-n
    json row = {{"n", k + 1}, {"lambda", lam}, {"lambda_mass_end", lam_me}, {"gap_upper", upper}};
    bool row_ok = upper >= rel;
    if (k + 1 < me.converged_negatives) {
      const double next = me.negatives[k + 1].lambda;
      const double lower = (lam - next) / std::abs(lam);  // lambda'_-n-1 < lambda_-n
      row["lambda_mass_end_next"] = next;
      row["gap_lower"] = lower;
      row_ok = row_ok && lower >= rel;
    }
    row["ok"] = row_ok;
    ok = ok && row_ok;
    rows.push_back(std::move(row));
  }
  e.witness["negative_chain"] = std::move(rows);
  e.witness["gap_rel_min"] = rel;

  const bool positive_case = c > 0.0 && alpha >= 0.0;
  e.hypotheses = {hypothesis("positive branch: c > 0", c > 0.0),
                  hypothesis("positive branch: alpha >= 0", alpha >= 0.0)};
  bool checked_positive = false;
  if (positive_case) {
    if (cc.converged_positives > 0 && me.converged_positives > 0) {
      const double l1 = cc.positives[0].lambda, l1_me = me.positives[0].lambda;
      const double gap = (l1 - l1_me) / std::abs(l1);
      e.witness["lambda_1"] = l1;
      e.witness["lambda_1_mass_end"] = l1_me;
      e.witness["gap_positive"] = gap;
      ok = ok && gap >= rel;
      checked_positive = true;
    } else {
      e.status = Status::Inconclusive;
      e.message = "first positive eigenvalue not converged";
      return e;
    }
  }
  if (common == 0 && !checked_positive) e.witness["vacuous"] = true;
  e.status = ok ? Status::Pass : Status::Fail;
  return e;
}

TheoremEntry verify_admissibility(SpectralStudy& s) {
  TheoremEntry e = entry("admissibility", s);
  const AdmissibleSet& adm = s.admissible();
  const Spectrum& sp = s.spectrum();
  e.witness["sup_lambda"] = adm.sup_lambda;
  e.witness["sup_n_elements"] = adm.n_elements;
  e.witness["sup_drift"] = adm.drift;

  bool ok = true;
  double margin = INFINITY;
  for (std::size_t k = 0; k < sp.converged_negatives; ++k) {
    margin = std::min(margin, adm.sup_lambda - sp.negatives[k].lambda);
    ok = ok && sp.negatives[k].lambda < adm.sup_lambda;
  }
  e.witness["negatives_checked"] = sp.converged_negatives;
  e.witness["negative_margin_min"] = std::isfinite(margin) ? json(margin) : json(nullptr);

  const double c = s.spec().c, alpha = s.spec().alpha;
  const bool mass_end = s.spec().bc == BoundaryKind::ClampedMassEnd;
  e.hypotheses = {hypothesis("positive branch: clamped_mass_end", mass_end),
                  hypothesis("positive branch: c > 0", c > 0.0),
                  hypothesis("positive branch: alpha >= 0", alpha >= 0.0)};
  if (sp.converged_positives > 0) {
    const double l1 = sp.positives[0].lambda;
    const ZeroReport z = locate_zeros(s.eigenfunction(1), s.tol().value_tol, s.tol().deriv_tol);
    e.witness["lambda_1"] = l1;
    e.witness["lambda_1_margin"] = adm.sup_lambda - l1;
    e.witness["lambda_1_zeros"] = z.zeros.size();
    if (mass_end && c > 0.0 && alpha >= 0.0) {
      ok = ok && l1 < adm.sup_lambda && z.zeros.empty();
    } else {
      e.witness["lambda_1_informational"] = true;
    }
  } else if (mass_end && c > 0.0 && alpha >= 0.0) {
    e.status = Status::Inconclusive;
    e.message = "first positive eigenvalue not converged";
    return e;
  }
  e.status = ok ? Status::Pass : Status::Fail;
  return e;
}

TheoremEntry verify_transform(SpectralStudy& s, double lambda_probe) {
  TheoremEntry e = entry("transform", s);
  const Tolerances& tol = s.tol();
  const SigmaProfile profile = sigma_solution(s.spec().p, lambda_probe, s.admissible(), tol);
  const ModelProblem model = transform_pencil(s.spec(), profile);

  std::mt19937_64 rng(s.options().seed);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const TestPolynomial y = random_test_polynomial(s.spec().bc, rng);
    worst = std::max(worst, congruence_sample(s.spec(), profile, model, y).defect());
  }
  bool ok = worst <= tol.congruence_rel && profile.ode_residual() <= tol.sigma_residual_rel;
  e.hypotheses = {"lambda in admissible set"};
  e.witness["lambda"] = lambda_probe;
  e.witness["gauge"] = SigmaProfile::gauge;
  e.witness["omega"] = profile.omega();
  e.witness["sigma_min"] = profile.min_sigma();
  e.witness["sigma_ode_residual"] = profile.ode_residual();
  e.witness["test_functions"] = 20;
  e.witness["congruence_defect_max"] = worst;

  const Spectrum& sp = s.spectrum();
  for (std::size_t k = 0; k < sp.negatives.size(); ++k) {
    if (std::abs(sp.negatives[k].lambda - lambda_probe) > 1e-12 * std::abs(lambda_probe)) continue;
    const Mesh t_mesh = model_mesh(profile, s.mesh());
    const double sing = model_singularity(model, s.spec().bc, t_mesh);
    e.witness["kernel_index"] = -static_cast<int>(k + 1);
    e.witness["model_n_elements"] = t_mesh.n_elements();
    e.witness["model_smallest_singular"] = sing;
    ok = ok && sing <= tol.kernel_singular;
    break;
  }
  e.status = ok ? Status::Pass : Status::Fail;
  return e;
}

TheoremEntry verify_inertia_consistency(SpectralStudy& s, std::size_t n_max) {
  TheoremEntry e = entry("inertia_consistency", s);
  const Spectrum& sp = s.spectrum();
  const PencilMatrices& m = s.pencil();
  bool ok = true;

  auto branch = [&](const std::vector<SpectralEntry>& eig, std::size_t converged) {
    json rows = json::array();
    const std::size_t k_top = std::min(n_max, converged);
    std::size_t previous = 0;
    for (std::size_t j = 0; j <= k_top; ++j) {
      // interval between the j-th and (j+1)-th eigenvalue counted outwards from 0
      const double lo = j == 0 ? 0.0 : eig[j - 1].lambda;
      const double hi = j < eig.size() ? eig[j].lambda : 2.0 * lo;
      if (j == 0 && eig.empty()) break;
      const double a = lo + (hi - lo) / 3.0, b = lo + 2.0 * (hi - lo) / 3.0;
      const std::size_t ia = inertia_index(m, a, s.tol()).index;
      const std::size_t ib = inertia_index(m, b, s.tol()).index;
      const std::size_t expected = j == 0 ? 0 : previous + 1;
      const bool row_ok = ia == ib && ia == expected;
      ok = ok && row_ok;
      previous = ia;
      rows.push_back({{"interval", {lo, hi}}, {"ind", {ia, ib}}, {"ok", row_ok}});
    }
    return rows;
  };
  e.witness["negative_branch"] = branch(sp.negatives, sp.converged_negatives);
  e.witness["positive_branch"] = branch(sp.positives, sp.converged_positives);
  e.status = ok ? Status::Pass : Status::Fail;
  return e;
}

json coefficient_json(const CoefficientField& f) {
  switch (f.kind()) {
    case CoefficientField::Kind::Constant:
      return {{"const", f.coefficients()[0]}};
    case CoefficientField::Kind::Polynomial:
      return {{"poly", f.coefficients()}};
    case CoefficientField::Kind::Table: {
      json rows = json::array();
      for (std::size_t i = 0; i < f.table_xs().size(); ++i)
        rows.push_back({f.table_xs()[i], f.table_values()[i]});
      return {{"table", std::move(rows)}};
    }
  }
  return nullptr;
}

json study_meta(const SpectralStudy& s) {
  const Tolerances& t = s.tol();
  json tol = {{"positivity_scan_points", t.positivity_scan_points},
              {"mu_floor_rel", t.mu_floor_rel},
              {"converged_drift_rel", t.converged_drift_rel},
              {"inertia_tau_rel", t.inertia_tau_rel},
              {"simplicity_gap_rel", t.simplicity_gap_rel},
              {"kernel_ratio", t.kernel_ratio},
              {"admissible_rel", t.admissible_rel},
              {"sigma_margin_rel", t.sigma_margin_rel},
              {"sigma_steps", t.sigma_steps},
              {"sigma_residual_rel", t.sigma_residual_rel},
              {"congruence_rel", t.congruence_rel},
              {"kernel_singular", t.kernel_singular},
              {"value_tol", t.value_tol},
              {"deriv_tol", t.deriv_tol},
              {"rk4_step", t.rk4_step},
              {"interlacing_gap_rel", t.interlacing_gap_rel}};
  return {{"p", coefficient_json(s.spec().p)},
          {"r", coefficient_json(s.spec().r)},
          {"c", s.spec().c},
          {"alpha", s.spec().alpha},
          {"bc", to_string(s.spec().bc)},
          {"mesh",
           {{"grading", s.mesh().grading()},
            {"n_elements", s.mesh().n_elements()},
            {"h_min", s.mesh().min_width()},
            {"refined_n_elements", 2 * s.mesh().n_elements()}}},
          {"samples", s.options().samples},
          {"seed", s.options().seed},
          {"tolerances", std::move(tol)}};
}

json spectrum_json(const Spectrum& s) {
  auto branch = [](const std::vector<SpectralEntry>& list, int sign) {
    json rows = json::array();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const double d = list[k].drift;
      rows.push_back({{"index", sign * static_cast<int>(k + 1)},
                      {"lambda", list[k].lambda},
                      {"converged", list[k].converged},
                      {"drift", std::isfinite(d) ? json(d) : json(nullptr)}});
    }
    return rows;
  };
  return {{"bc", to_string(s.bc)},
          {"negative_count", s.negatives.size()},
          {"converged_negatives", s.converged_negatives},
          {"positive_count", s.positives.size()},
          {"converged_positives", s.converged_positives},
          {"kernel_dimension", s.kernel_dimension},
          {"mu_floor", s.mu_floor},
          {"negatives", branch(s.negatives, -1)},
          {"positives", branch(s.positives, 1)}};
}

json zero_report_json(const ZeroReport& z) {
  json zeros = json::array();
  for (const Zero& zero : z.zeros)
    zeros.push_back({{"x", zero.x}, {"simple", zero.simple}, {"slope", zero.slope}});
  return {{"zeros", std::move(zeros)},
          {"sign_changes", z.sign_changes},
          {"value_tol", z.value_tol},
          {"deriv_tol", z.deriv_tol},
          {"warnings", z.warnings}};
}

void write_eigenfunction_csv(const EigenfunctionSample& fn, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << std::setprecision(17) << "x,y,dy,ddy\n";
  for (std::size_t i = 0; i < fn.xs.size(); ++i)
    out << fn.xs[i] << ',' << fn.y[i] << ',' << fn.dy[i] << ',' << fn.ddy[i] << '\n';
}

TheoremReport run_verify(const ParsedConfig& config, bool pair) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  TheoremReport report;

  std::vector<SpectralStudy> studies;
  if (pair) {
    studies.emplace_back(config.spec.with_boundary(BoundaryKind::ClampedClamped), config.mesh,
                         config.options);
    studies.emplace_back(config.spec.with_boundary(BoundaryKind::ClampedMassEnd), config.mesh,
                         config.options);
  } else {
    studies.emplace_back(config.spec, config.mesh, config.options);
  }

  auto timed = [&](const std::string& key, auto&& fn) {
    const auto t0 = clock::now();
    report.theorems.push_back(fn());
    report.timings[key] = std::chrono::duration<double>(clock::now() - t0).count();
  };

  for (SpectralStudy& s : studies) {
    const std::string bc = to_string(s.spec().bc);
    const auto t0 = clock::now();
    s.spectrum();
    report.timings[bc + "/spectrum"] = std::chrono::duration<double>(clock::now() - t0).count();

    timed(bc + "/negative_simplicity", [&] { return verify_simplicity(s); });
    timed(bc + "/zero_counts", [&] { return verify_zero_counts(s); });
    timed(bc + "/negative_count", [&] { return verify_negative_count(s); });
    timed(bc + "/admissibility", [&] { return verify_admissibility(s); });
    timed(bc + "/inertia_consistency", [&] { return verify_inertia_consistency(s); });
    const Spectrum& sp = s.spectrum();
    const double probe = sp.converged_negatives > 0 ? sp.negatives[0].lambda : 0.0;
    timed(bc + "/transform", [&] { return verify_transform(s, probe); });
  }
  if (pair) timed("interlacing", [&] { return verify_interlacing(studies[0], studies[1]); });

  report.meta = study_meta(studies.front());
  report.meta["bc"] = pair ? json::array({"clamped_clamped", "clamped_mass_end"})
                           : json(to_string(config.spec.bc));
  report.meta["pair"] = pair;
  report.timings["total"] = std::chrono::duration<double>(clock::now() - start).count();
  return report;
}

}  // namespace beampencil
