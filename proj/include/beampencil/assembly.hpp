#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "beampencil/hermite.hpp"
#include "beampencil/problem.hpp"

namespace beampencil {

/// One term  scale * \int field(x) u^(order) v^(order) dx  of a symmetric
/// bilinear form. A null field stands for the constant 1.
struct FormTerm {
  int order = 0;
  const CoefficientField* field = nullptr;
  double scale = 1.0;
};

/// Assembles the free-DOF matrix of  sum_k term_k + end_weight * u(1) v(1)
/// with cubic Hermite elements. The result is exactly symmetric.
Eigen::MatrixXd assemble_form(const Mesh& mesh, const DofMap& dofs,
                              std::span<const FormTerm> terms, double end_weight = 0.0);

/// <T(lambda) y, y> = y^T (A - lambda B) y.
///   A: \int p |y''|^2
///   B: \int |y'|^2 + c r |y|^2  (+ alpha |y(1)|^2 for clamped_mass_end)
struct PencilMatrices {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  DofMap dofs;
  Mesh mesh;
  BoundaryKind bc;
};

/// Model pencil S:  A_hat: \int p_hat |y''|^2,  B_hat: \int r_hat |y|^2 + alpha |y(1)|^2.
struct ModelMatrices {
  Eigen::MatrixXd A_hat;
  Eigen::MatrixXd B_hat;
  DofMap dofs;
  Mesh mesh;
  BoundaryKind bc;
};

PencilMatrices assemble_pencil(const ProblemSpec& spec, const Mesh& mesh);

/// `p_hat` must be uniformly positive; `r_hat` may take either sign.
ModelMatrices assemble_model(const CoefficientField& p_hat, const CoefficientField& r_hat,
                             double alpha, BoundaryKind bc, const Mesh& mesh);

/// Solution of (p y'')'' = r f with the essential conditions of `bc`; for
/// clamped_mass_end the natural condition is (p y'')'(1) + alpha f(1) = 0.
struct BvpSolution {
  HermiteFunction y;
  DofMap dofs;
  /// max_i |(A y - load)_i| / max_i |load_i|  (0 when the load vanishes)
  double weak_residual = 0.0;
};

BvpSolution solve_model_bvp(const CoefficientField& p, const CoefficientField& r, double alpha,
                            BoundaryKind bc, const CoefficientField& f, const Mesh& mesh);

/// (p y'')'(1) recovered weakly from the test function z = 2x^3 - 3x^2
/// (z(0)=z'(0)=z'(1)=0, z(1)=-1):
///   (p y'')'(1) = \int p y'' z'' - \int g z,   where (p y'')'' = g.
/// `rhs` evaluates g; it is integrated with the same quadrature.
template <typename Rhs>
double recover_end_flux(const HermiteFunction& y, const CoefficientField& p, Rhs&& rhs);

/// Writes a matrix as row-major CSV (full, both triangles).
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

// -- implementation of the template -------------------------------------

template <typename Rhs>
double recover_end_flux(const HermiteFunction& y, const CoefficientField& p, Rhs&& rhs) {
  const Mesh& mesh = y.mesh();
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double a = mesh.node(e), b = mesh.node(e + 1);
    integrate_pieces(a, b, merged_breakpoints(a, b, {&p}), [&](double x, double w) {
      const HermitePoint v = y.on_element(e, x);
      const double z = 2.0 * x * x * x - 3.0 * x * x;
      const double zpp = 12.0 * x - 6.0;
      acc += w * (p.eval_clamped(x) * v.ddy * zpp - rhs(e, x, v) * z);
    });
  }
  return acc;
}

}  // namespace beampencil
