#include "beampencil/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace beampencil {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

CoefficientField CoefficientField::constant(double value) {
  if (!std::isfinite(value)) throw ConfigError("constant coefficient is not finite");
  CoefficientField f;
  f.kind_ = Kind::Constant;
  f.coeffs_ = {value};
  return f;
}

CoefficientField CoefficientField::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw ConfigError("polynomial coefficient list is empty");
  for (double a : coefficients)
    if (!std::isfinite(a)) throw ConfigError("polynomial coefficient is not finite");
  CoefficientField f;
  f.kind_ = Kind::Polynomial;
  f.coeffs_ = std::move(coefficients);
  return f;
}

CoefficientField CoefficientField::table(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() != values.size()) throw ConfigError("table abscissae and values differ in length");
  if (xs.size() < 2) throw ConfigError("table needs at least two points");
  if (xs.front() != 0.0 || xs.back() != 1.0)
    throw ConfigError("table must start at x=0 and end at x=1");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(values[i]))
      throw ConfigError("table entry is not finite");
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw ConfigError("table abscissae must be strictly increasing");
  }
  CoefficientField f;
  f.kind_ = Kind::Table;
  f.xs_ = std::move(xs);
  f.coeffs_ = std::move(values);
  return f;
}

double CoefficientField::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("coefficient evaluated outside [0,1] at x=" + format_number(x));
  return eval_clamped(x);
}

double CoefficientField::eval_clamped(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  switch (kind_) {
    case Kind::Constant:
      return coeffs_[0];
    case Kind::Polynomial: {
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Kind::Table: {
      auto hi = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (hi == xs_.end()) return coeffs_.back();
      std::size_t j = static_cast<std::size_t>(hi - xs_.begin());
      std::size_t i = j - 1;
      double s = (x - xs_[i]) / (xs_[j] - xs_[i]);
      return coeffs_[i] + s * (coeffs_[j] - coeffs_[i]);
    }
  }
  return 0.0;
}

std::vector<double> CoefficientField::breakpoints_in(double a, double b) const {
  std::vector<double> out;
  if (kind_ != Kind::Table) return out;
  auto lo = std::upper_bound(xs_.begin(), xs_.end(), a);
  auto hi = std::lower_bound(xs_.begin(), xs_.end(), b);
  if (lo < hi) out.assign(lo, hi);
  return out;
}

PositivityScan CoefficientField::scan(std::size_t points) const {
  PositivityScan s;
  s.points = points;
  s.value_min = eval_clamped(0.0);
  s.x_min = 0.0;
  auto visit = [&](double x) {
    double v = eval_clamped(x);
    if (v < s.value_min) {
      s.value_min = v;
      s.x_min = x;
    }
  };
  for (std::size_t i = 0; i < points; ++i)
    visit(static_cast<double>(i) / static_cast<double>(points - 1));
  for (double x : xs_) visit(x);
  return s;
}

CoefficientField CoefficientField::certified_positive(const std::string& name,
                                                      std::size_t points) const {
  PositivityScan s = scan(points);
  if (!(s.value_min > 0.0))
    throw ConfigError(name + " not uniformly positive at x=" + format_number(s.x_min) +
                      " (value " + format_number(s.value_min) + ")");
  CoefficientField f = *this;
  f.floor_ = s.value_min;
  return f;
}

double CoefficientField::floor() const {
  if (!floor_) throw std::logic_error("coefficient carries no positivity certificate");
  return *floor_;
}

CoefficientField CoefficientField::reflected() const {
  CoefficientField f = *this;
  switch (kind_) {
    case Kind::Constant:
      break;
    case Kind::Polynomial: {
      // a(1-x) = sum_k a_k (1-x)^k, expanded with binomial coefficients.
      const std::size_t n = coeffs_.size();
      std::vector<double> out(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        double binom = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
          double sign = (j % 2 == 0) ? 1.0 : -1.0;
          out[j] += coeffs_[k] * binom * sign;
          binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
      }
      f.coeffs_ = std::move(out);
      break;
    }
    case Kind::Table: {
      const std::size_t n = xs_.size();
      for (std::size_t i = 0; i < n; ++i) {
        f.xs_[i] = 1.0 - xs_[n - 1 - i];
        f.coeffs_[i] = coeffs_[n - 1 - i];
      }
      f.xs_.front() = 0.0;
      f.xs_.back() = 1.0;
      break;
    }
  }
  return f;
}

CoefficientField CoefficientField::scaled(double s) const {
  CoefficientField f = *this;
  for (double& v : f.coeffs_) v *= s;
  if (floor_ && s > 0.0)
    f.floor_ = *floor_ * s;
  else
    f.floor_.reset();
  return f;
}

std::string to_string(BoundaryKind bc) {
  return bc == BoundaryKind::ClampedClamped ? "clamped_clamped" : "clamped_mass_end";
}

BoundaryKind boundary_kind_from_string(const std::string& name) {
  if (name == "clamped_clamped") return BoundaryKind::ClampedClamped;
  if (name == "clamped_mass_end") return BoundaryKind::ClampedMassEnd;
  throw ConfigError("unknown boundary family '" + name + "'");
}

ProblemSpec ProblemSpec::make(CoefficientField p, CoefficientField r, double c, double alpha,
                              BoundaryKind bc) {
  if (!std::isfinite(c)) throw ConfigError("c is not finite");
  if (!std::isfinite(alpha)) throw ConfigError("alpha is not finite");
  ProblemSpec s;
  s.p = p.uniformly_positive() ? std::move(p) : p.certified_positive("p");
  s.r = r.uniformly_positive() ? std::move(r) : r.certified_positive("r");
  s.c = c;
  s.alpha = alpha;
  s.bc = bc;
  return s;
}

ProblemSpec ProblemSpec::with_boundary(BoundaryKind other) const {
  ProblemSpec s = *this;
  s.bc = other;
  return s;
}

Mesh::Mesh(std::vector<double> nodes, std::string grading)
    : nodes_(std::move(nodes)), grading_(std::move(grading)) {}

Mesh Mesh::uniform(std::size_t n_elements) {
  if (n_elements < 1) throw ConfigError("mesh needs at least one element");
  std::vector<double> nodes(n_elements + 1);
  for (std::size_t i = 0; i <= n_elements; ++i)
    nodes[i] = static_cast<double>(i) / static_cast<double>(n_elements);
  nodes.back() = 1.0;
  return Mesh(std::move(nodes), "uniform");
}

Mesh Mesh::cosine(std::size_t n_elements) {
  if (n_elements < 1) throw ConfigError("mesh needs at least one element");
  std::vector<double> nodes(n_elements + 1);
  for (std::size_t i = 0; i <= n_elements; ++i)
    nodes[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n_elements)));
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  return Mesh(std::move(nodes), "cosine");
}

Mesh Mesh::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw ConfigError("mesh needs at least two nodes");
  if (nodes.front() != 0.0 || nodes.back() != 1.0)
    throw ConfigError("mesh nodes must start at 0 and end at 1");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw ConfigError("mesh nodes must be strictly increasing");
  return Mesh(std::move(nodes), "nodes");
}

double Mesh::min_width() const {
  double w = 1.0;
  for (std::size_t e = 0; e < n_elements(); ++e) w = std::min(w, width(e));
  return w;
}

std::size_t Mesh::locate(double x) const {
  if (x <= nodes_.front()) return 0;
  if (x >= nodes_.back()) return n_elements() - 1;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

Mesh Mesh::refined() const {
  std::vector<double> out;
  out.reserve(2 * nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    out.push_back(nodes_[i]);
    out.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  out.push_back(nodes_.back());
  return Mesh(std::move(out), grading_);
}

void check_mesh_for(const Mesh& mesh, BoundaryKind bc) {
  if (bc == BoundaryKind::ClampedClamped && mesh.n_elements() < 2)
    throw ConfigError("clamped_clamped needs n_elements >= 2 (no free unknowns otherwise)");
  if (mesh.n_elements() < 1) throw ConfigError("mesh has no elements");
}

}  // namespace beampencil
