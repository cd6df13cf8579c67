#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "beampencil/problem.hpp"

namespace beampencil {

/// 5-point Gauss-Legendre rule on [0,1] (exact to degree 9).
struct GaussRule {
  static constexpr std::array<double, 5> nodes = {
      0.046910077030668004, 0.23076534494715845, 0.5, 0.76923465505284155,
      0.953089922969332};
  static constexpr std::array<double, 5> weights = {
      0.11846344252809454, 0.23931433524968324, 0.28444444444444444, 0.23931433524968324,
      0.11846344252809454};
};

/// Cubic Hermite shape functions of one element and their x-derivatives.
/// Local DOF order: y(a), y'(a), y(b), y'(b).
struct HermiteShape {
  std::array<double, 4> value{};
  std::array<double, 4> d1{};
  std::array<double, 4> d2{};
  std::array<double, 4> d3{};
};

HermiteShape hermite_shape(double a, double b, double x);

/// Calls fn(x, w) for every quadrature point of [a,b], split at `breaks`
/// (sorted, strictly inside (a,b)), so piecewise-linear coefficients are
/// integrated exactly against polynomial integrands.
template <typename Fn>
void integrate_pieces(double a, double b, const std::vector<double>& breaks, Fn&& fn) {
  double lo = a;
  auto piece = [&](double hi) {
    const double h = hi - lo;
    for (std::size_t q = 0; q < GaussRule::nodes.size(); ++q)
      fn(lo + h * GaussRule::nodes[q], h * GaussRule::weights[q]);
    lo = hi;
  };
  for (double x : breaks) piece(x);
  piece(b);
}

/// Merged, sorted breakpoints of several fields inside (a,b).
std::vector<double> merged_breakpoints(double a, double b,
                                       std::initializer_list<const CoefficientField*> fields);

/// Global DOF numbering: node i owns 2i (value) and 2i+1 (slope).
/// Essential conditions remove DOFs; the rest are the free unknowns.
///
/// With an end anchor (fourth-order clamped_mass_end) the free value y(1) is
/// not carried by the nodal shape function of x=1 but by the global cubic
/// phi(x) = 3x^2 - 2x^3 (phi(0)=phi'(0)=phi'(1)=0, phi(1)=1), whose unknown
/// is the last free index. The discrete space is unchanged; the nodal
/// unknowns then only carry y - y(1) phi, which is small wherever the mesh
/// is fine near the free end, so the curvature matrix stays well conditioned
/// on graded meshes.
class DofMap {
 public:
  struct Term {
    long free = -1;
    double coefficient = 1.0;
  };

  DofMap() = default;
  DofMap(std::size_t n_nodes, std::vector<std::size_t> constrained);

  /// Essential conditions of the fourth-order problems.
  static DofMap fourth_order(const Mesh& mesh, BoundaryKind bc);
  /// Essential conditions of the second-order problems: y(0)=y(1)=0 for
  /// clamped_clamped, y(0)=0 for clamped_mass_end.
  static DofMap second_order(const Mesh& mesh, BoundaryKind bc);

  std::size_t size() const { return n_free_; }
  std::size_t global_size() const { return global_to_free_.size(); }
  /// Free index of the nodal shape function of global DOF g; -1 when g is
  /// constrained or carried by the anchor.
  long free_index(std::size_t global) const { return global_to_free_[global]; }
  /// Free index of the anchor, or -1.
  long anchor() const { return anchor_; }

  static double anchor_value(double x) { return x * x * (3.0 - 2.0 * x); }
  static double anchor_d1(double x) { return 6.0 * x * (1.0 - x); }
  static double anchor_d2(double x) { return 6.0 - 12.0 * x; }

  /// Free unknowns (with coefficients) that make up nodal DOF g.
  std::vector<Term> terms(std::size_t global) const;

  /// Free vector -> global nodal vector (zeros at constrained DOFs).
  Eigen::VectorXd expand(const Eigen::VectorXd& free) const;
  /// Global nodal vector -> free vector.
  Eigen::VectorXd restrict(const Eigen::VectorXd& global) const;

 private:
  std::vector<long> global_to_free_;
  std::vector<double> nodes_;  // only with an anchor
  std::size_t n_free_ = 0;
  long anchor_ = -1;

  friend DofMap with_end_anchor(DofMap base, const Mesh& mesh);
};

/// Point values of a Hermite interpolant.
struct HermitePoint {
  double y = 0.0;
  double dy = 0.0;
  double ddy = 0.0;
  double d3y = 0.0;
};

/// A C^1 piecewise-cubic function given by nodal values and slopes.
class HermiteFunction {
 public:
  HermiteFunction() : coeffs_(Eigen::VectorXd::Zero(4)) {}
  HermiteFunction(Mesh mesh, Eigen::VectorXd global_coefficients);

  HermitePoint operator()(double x) const;
  /// Evaluates on element e (useful for one-sided third derivatives at nodes).
  HermitePoint on_element(std::size_t e, double x) const;

  const Mesh& mesh() const { return mesh_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

 private:
  Mesh mesh_;
  Eigen::VectorXd coeffs_;
};

}  // namespace beampencil
