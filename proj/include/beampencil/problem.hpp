#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace beampencil {

/// Raised for malformed configurations and invalid problem data.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a coefficient is evaluated outside [0,1].
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical routine cannot deliver its postcondition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of a dense positivity scan of a coefficient.
struct PositivityScan {
  double x_min = 0.0;
  double value_min = 0.0;
  std::size_t points = 0;
};

/// A real function on [0,1]: a constant, a polynomial sum a_k x^k, or a
/// table of (x, v) pairs interpolated linearly. Tables must start at x=0,
/// end at x=1 and be strictly increasing in x.
///
/// A field may carry a uniform positivity certificate (`floor()`), obtained
/// from a dense scan. Fields without the certificate may take either sign.
class CoefficientField {
 public:
  enum class Kind { Constant, Polynomial, Table };

  static CoefficientField constant(double value);
  static CoefficientField polynomial(std::vector<double> coefficients);
  static CoefficientField table(std::vector<double> xs, std::vector<double> values);

  Kind kind() const { return kind_; }

  /// Throws DomainError when x is outside [0,1].
  double operator()(double x) const;

  /// Same as operator() without the domain check; x is clamped to [0,1].
  double eval_clamped(double x) const;

  /// Table abscissae strictly inside (a,b); empty for smooth kinds.
  std::vector<double> breakpoints_in(double a, double b) const;

  /// Minimum over a uniform grid of `points` nodes plus the table nodes.
  PositivityScan scan(std::size_t points = 10001) const;

  /// Returns a copy flagged uniformly positive, or throws ConfigError
  /// naming `name` and the offending abscissa.
  CoefficientField certified_positive(const std::string& name,
                                      std::size_t points = 10001) const;

  bool uniformly_positive() const { return floor_.has_value(); }
  /// The certified lower bound epsilon_0 (only for certified fields).
  double floor() const;

  /// x -> f(1-x); the certificate is preserved.
  CoefficientField reflected() const;
  /// x -> s*f(x); the certificate is kept only for s > 0.
  CoefficientField scaled(double s) const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  const std::vector<double>& table_xs() const { return xs_; }
  const std::vector<double>& table_values() const { return coeffs_; }

 private:
  CoefficientField() = default;

  Kind kind_ = Kind::Constant;
  std::vector<double> coeffs_;  // constant: {v}; polynomial: a_k; table: values
  std::vector<double> xs_;      // table only
  std::optional<double> floor_;
};

enum class BoundaryKind {
  /// y(0)=y'(0)=y(1)=y'(1)=0
  ClampedClamped,
  /// y(0)=y'(0)=y'(1)=0, (py'')'(1) + lambda*alpha*y(1) = 0 (natural)
  ClampedMassEnd,
};

std::string to_string(BoundaryKind bc);
BoundaryKind boundary_kind_from_string(const std::string& name);

/// The pencil instance (py'')'' - lambda(-y'' + c r y) = 0 with its boundary family.
struct ProblemSpec {
  CoefficientField p = CoefficientField::constant(1.0);
  CoefficientField r = CoefficientField::constant(1.0);
  double c = 0.0;
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::ClampedClamped;

  /// Certifies p and r and checks that c, alpha are finite.
  static ProblemSpec make(CoefficientField p, CoefficientField r, double c,
                          double alpha, BoundaryKind bc);

  ProblemSpec with_boundary(BoundaryKind other) const;
};

/// Element partition of [0,1].
class Mesh {
 public:
  /// The single element [0,1].
  Mesh() : nodes_{0.0, 1.0}, grading_("uniform") {}

  static Mesh uniform(std::size_t n_elements);
  /// Nodes x_i = (1 - cos(pi i / n)) / 2, clustered towards both ends.
  static Mesh cosine(std::size_t n_elements);
  static Mesh from_nodes(std::vector<double> nodes);

  std::size_t n_elements() const { return nodes_.size() - 1; }
  std::size_t n_nodes() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double width(std::size_t e) const { return nodes_[e + 1] - nodes_[e]; }
  double min_width() const;

  /// Index of the element containing x (right-closed at x=1).
  std::size_t locate(double x) const;

  /// Bisects every element; preserves any grading.
  Mesh refined() const;

  /// "uniform", "cosine" or "nodes".
  const std::string& grading() const { return grading_; }

 private:
  explicit Mesh(std::vector<double> nodes, std::string grading);
  std::vector<double> nodes_;
  std::string grading_;
};

/// Throws ConfigError when the mesh leaves no free unknowns for `bc`.
void check_mesh_for(const Mesh& mesh, BoundaryKind bc);

}  // namespace beampencil
