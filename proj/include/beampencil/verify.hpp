#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beampencil/config.hpp"
#include "beampencil/oscillation.hpp"
#include "beampencil/spectrum.hpp"
#include "beampencil/sturm.hpp"

namespace beampencil {

enum class Status { Pass, Fail, Skipped, Inconclusive };

std::string to_string(Status s);

struct TheoremEntry {
  std::string name;
  BoundaryKind bc = BoundaryKind::ClampedClamped;
  Status status = Status::Skipped;
  std::vector<std::string> hypotheses;  // checked (or unmet, for skipped entries)
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
  std::string message;
};

struct TheoremReport {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<TheoremEntry> theorems;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();

  bool any_fail() const;
  /// 0 when no entry failed, 2 otherwise.
  int exit_code() const { return any_fail() ? 2 : 0; }
  nlohmann::ordered_json to_json(bool with_timings = true) const;
};

/// Lazily computed artifacts of one problem instance, shared by the checks.
class SpectralStudy {
 public:
  SpectralStudy(ProblemSpec spec, Mesh mesh, RunOptions options);

  const ProblemSpec& spec() const { return spec_; }
  const Mesh& mesh() const { return mesh_; }
  const RunOptions& options() const { return options_; }
  const Tolerances& tol() const { return options_.tol; }

  const Spectrum& spectrum();
  const PencilMatrices& pencil();
  const AdmissibleSet& admissible();
  const SlCount& sl_count();
  const EigenfunctionSample& eigenfunction(int signed_index);

 private:
  ProblemSpec spec_;
  Mesh mesh_;
  RunOptions options_;
  std::optional<Spectrum> spectrum_;
  std::optional<PencilMatrices> pencil_;
  std::optional<AdmissibleSet> admissible_;
  std::optional<SlCount> sl_;
  std::vector<std::pair<int, EigenfunctionSample>> eigenfunctions_;
};

TheoremEntry verify_simplicity(SpectralStudy& s);
TheoremEntry verify_zero_counts(SpectralStudy& s, std::size_t n_max = 5);
TheoremEntry verify_negative_count(SpectralStudy& s);
TheoremEntry verify_interlacing(SpectralStudy& clamped, SpectralStudy& mass_end);
TheoremEntry verify_admissibility(SpectralStudy& s);
/// Throws ConfigError when lambda_probe is outside the admissible set.
TheoremEntry verify_transform(SpectralStudy& s, double lambda_probe);
/// ind T(lambda) is constant between consecutive eigenvalues and grows by one
/// across each eigenvalue, moving away from 0 on either branch.
TheoremEntry verify_inertia_consistency(SpectralStudy& s, std::size_t n_max = 8);

/// All checks for one config; with `pair`, both boundary families plus interlacing.
TheoremReport run_verify(const ParsedConfig& config, bool pair);

/// Deterministic metadata block of a study.
nlohmann::ordered_json study_meta(const SpectralStudy& s);

// JSON views used by the CLI and bindings.
nlohmann::ordered_json spectrum_json(const Spectrum& s);
nlohmann::ordered_json zero_report_json(const ZeroReport& z);
nlohmann::ordered_json coefficient_json(const CoefficientField& f);

/// Writes x,y,dy,ddy to `path`.
void write_eigenfunction_csv(const EigenfunctionSample& fn, const std::string& path);

}  // namespace beampencil
