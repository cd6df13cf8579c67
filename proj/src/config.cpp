#include "beampencil/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace beampencil {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

CoefficientField coefficient_from(const json& j, const std::string& name) {
  if (j.is_number()) return CoefficientField::constant(j.get<double>());
  if (!j.is_object() || j.size() != 1)
    throw ConfigError(name + " must be {\"const\": v}, {\"poly\": [...]} or {\"table\": [...]}");
  if (j.contains("const")) return CoefficientField::constant(number(j["const"], name + ".const"));
  if (j.contains("poly")) {
    const json& a = j["poly"];
    if (!a.is_array()) throw ConfigError(name + ".poly must be an array");
    std::vector<double> coeffs;
    for (const json& v : a) coeffs.push_back(number(v, name + ".poly entry"));
    return CoefficientField::polynomial(std::move(coeffs));
  }
  if (j.contains("table")) {
    const json& t = j["table"];
    if (!t.is_array()) throw ConfigError(name + ".table must be an array of [x, v] pairs");
    std::vector<double> xs, vs;
    for (const json& row : t) {
      if (!row.is_array() || row.size() != 2)
        throw ConfigError(name + ".table rows must be [x, v] pairs");
      xs.push_back(number(row[0], name + ".table x"));
      vs.push_back(number(row[1], name + ".table v"));
    }
    return CoefficientField::table(std::move(xs), std::move(vs));
  }
  throw ConfigError(name + " has an unknown coefficient kind");
}

template <typename T>
void override_member(const json& block, const char* key, T& member) {
  if (!block.contains(key)) return;
  const json& v = block[key];
  if (!v.is_number()) throw ConfigError(std::string("tolerances.") + key + " must be a number");
  member = v.get<T>();
}

Tolerances tolerances_from(const json& block) {
  Tolerances t;
  if (!block.is_object()) throw ConfigError("tolerances must be an object");
  override_member(block, "positivity_scan_points", t.positivity_scan_points);
  override_member(block, "mu_floor_rel", t.mu_floor_rel);
  override_member(block, "converged_drift_rel", t.converged_drift_rel);
  override_member(block, "inertia_tau_rel", t.inertia_tau_rel);
  override_member(block, "simplicity_gap_rel", t.simplicity_gap_rel);
  override_member(block, "kernel_ratio", t.kernel_ratio);
  override_member(block, "admissible_rel", t.admissible_rel);
  override_member(block, "sigma_margin_rel", t.sigma_margin_rel);
  override_member(block, "sigma_steps", t.sigma_steps);
  override_member(block, "sigma_residual_rel", t.sigma_residual_rel);
  override_member(block, "congruence_rel", t.congruence_rel);
  override_member(block, "kernel_singular", t.kernel_singular);
  override_member(block, "value_tol", t.value_tol);
  override_member(block, "deriv_tol", t.deriv_tol);
  override_member(block, "rk4_step", t.rk4_step);
  override_member(block, "interlacing_gap_rel", t.interlacing_gap_rel);
  return t;
}

}  // namespace

CoefficientField parse_coefficient(const std::string& json_text, const std::string& name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed coefficient: " + std::string(e.what()));
  }
  return coefficient_from(j, name);
}

ParsedConfig parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed configuration: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");

  static const char* known[] = {"p", "r", "c", "alpha", "bc", "n_elements", "samples",
                                "mesh", "nodes", "seed", "tolerances"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown configuration key '" + it.key() + "'");
  }
  for (const char* k : {"p", "r", "c", "alpha", "bc"})
    if (!j.contains(k)) throw ConfigError(std::string("missing configuration key '") + k + "'");

  ParsedConfig out;
  if (j.contains("tolerances")) out.options.tol = tolerances_from(j["tolerances"]);
  const std::size_t scan = out.options.tol.positivity_scan_points;
  if (scan < 2) throw ConfigError("positivity_scan_points must be >= 2");

  if (!j["bc"].is_string()) throw ConfigError("bc must be a string");
  BoundaryKind bc = boundary_kind_from_string(j["bc"].get<std::string>());
  CoefficientField p = coefficient_from(j["p"], "p").certified_positive("p", scan);
  CoefficientField r = coefficient_from(j["r"], "r").certified_positive("r", scan);
  out.spec = ProblemSpec::make(std::move(p), std::move(r), number(j["c"], "c"),
                               number(j["alpha"], "alpha"), bc);

  if (j.contains("nodes")) {
    std::vector<double> nodes;
    if (!j["nodes"].is_array()) throw ConfigError("nodes must be an array");
    for (const json& v : j["nodes"]) nodes.push_back(number(v, "nodes entry"));
    out.mesh = Mesh::from_nodes(std::move(nodes));
  } else {
    if (!j.contains("n_elements")) throw ConfigError("missing configuration key 'n_elements'");
    const json& n = j["n_elements"];
    if (!n.is_number_integer() || n.get<long long>() < 1)
      throw ConfigError("n_elements must be a positive integer");
    const auto count = static_cast<std::size_t>(n.get<long long>());
    std::string grading = j.value("mesh", std::string("uniform"));
    if (grading == "uniform")
      out.mesh = Mesh::uniform(count);
    else if (grading == "cosine")
      out.mesh = Mesh::cosine(count);
    else
      throw ConfigError("mesh must be \"uniform\" or \"cosine\"");
  }
  check_mesh_for(out.mesh, bc);

  if (j.contains("samples")) {
    const json& s = j["samples"];
    if (!s.is_number_integer() || s.get<long long>() < 3)
      throw ConfigError("samples must be an integer >= 3");
    out.options.samples = static_cast<std::size_t>(s.get<long long>());
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    out.options.seed = j["seed"].get<std::uint64_t>();
  }
  return out;
}

ParsedConfig load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace beampencil
