#include "beampencil/assembly.hpp"

#include <fstream>
#include <iomanip>

namespace beampencil {

namespace {

/// Shape functions that are live on one element: the free nodal Hermite
/// functions plus, with an anchor, the global cubic carrying y(1).
struct ElementShapes {
  std::vector<long> slots;
  std::vector<int> local;  // Hermite index 0..3, or -1 for the anchor

  ElementShapes(const DofMap& dofs, std::size_t e) {
    for (int k = 0; k < 4; ++k) {
      const long f = dofs.free_index(2 * e + static_cast<std::size_t>(k));
      if (f < 0) continue;
      slots.push_back(f);
      local.push_back(k);
    }
    if (dofs.anchor() >= 0) {
      slots.push_back(dofs.anchor());
      local.push_back(-1);
    }
  }

  /// Derivative of the given order of slot a at x.
  double eval(std::size_t a, const HermiteShape& s, int order, double x) const {
    const int k = local[a];
    if (k < 0) {
      switch (order) {
        case 0:
          return DofMap::anchor_value(x);
        case 1:
          return DofMap::anchor_d1(x);
        default:
          return DofMap::anchor_d2(x);
      }
    }
    switch (order) {
      case 0:
        return s.value[static_cast<std::size_t>(k)];
      case 1:
        return s.d1[static_cast<std::size_t>(k)];
      default:
        return s.d2[static_cast<std::size_t>(k)];
    }
  }
};

}  // namespace

Eigen::MatrixXd assemble_form(const Mesh& mesh, const DofMap& dofs,
                              std::span<const FormTerm> terms, double end_weight) {
  const auto n = static_cast<Eigen::Index>(dofs.size());
  if (n == 0) throw ConfigError("zero free degrees of freedom (mesh too coarse)");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);

  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double a = mesh.node(e), b = mesh.node(e + 1);
    std::vector<double> breaks;
    for (const FormTerm& t : terms) {
      if (t.field == nullptr) continue;
      auto more = t.field->breakpoints_in(a, b);
      breaks.insert(breaks.end(), more.begin(), more.end());
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const ElementShapes shapes(dofs, e);
    const std::size_t m = shapes.slots.size();
    double local[5][5] = {};
    double d[5];
    integrate_pieces(a, b, breaks, [&](double x, double w) {
      const HermiteShape s = hermite_shape(a, b, x);
      for (const FormTerm& t : terms) {
        const double k = w * t.scale * (t.field ? t.field->eval_clamped(x) : 1.0);
        for (std::size_t i = 0; i < m; ++i) d[i] = shapes.eval(i, s, t.order, x);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = i; j < m; ++j) local[i][j] += k * d[i] * d[j];
      }
    });

    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        M(shapes.slots[i], shapes.slots[j]) += local[i][j];
        if (shapes.slots[i] != shapes.slots[j]) M(shapes.slots[j], shapes.slots[i]) += local[i][j];
      }
    }
  }

  if (end_weight != 0.0) {
    // y(1) is either the nodal value DOF at x=1 or the anchor (phi(1) = 1).
    const long f = dofs.anchor() >= 0 ? dofs.anchor() : dofs.free_index(2 * (mesh.n_nodes() - 1));
    if (f >= 0) M(f, f) += end_weight;
  }
  return M;
}

PencilMatrices assemble_pencil(const ProblemSpec& spec, const Mesh& mesh) {
  DofMap dofs = DofMap::fourth_order(mesh, spec.bc);
  const FormTerm a_terms[] = {{2, &spec.p, 1.0}};
  const FormTerm b_terms[] = {{1, nullptr, 1.0}, {0, &spec.r, spec.c}};
  const double end = spec.bc == BoundaryKind::ClampedMassEnd ? spec.alpha : 0.0;
  Eigen::MatrixXd A = assemble_form(mesh, dofs, a_terms);
  Eigen::MatrixXd B = assemble_form(mesh, dofs, b_terms, end);
  return PencilMatrices{std::move(A), std::move(B), std::move(dofs), mesh, spec.bc};
}

ModelMatrices assemble_model(const CoefficientField& p_hat, const CoefficientField& r_hat,
                             double alpha, BoundaryKind bc, const Mesh& mesh) {
  DofMap dofs = DofMap::fourth_order(mesh, bc);
  const FormTerm a_terms[] = {{2, &p_hat, 1.0}};
  const FormTerm b_terms[] = {{0, &r_hat, 1.0}};
  const double end = bc == BoundaryKind::ClampedMassEnd ? alpha : 0.0;
  Eigen::MatrixXd A = assemble_form(mesh, dofs, a_terms);
  Eigen::MatrixXd B = assemble_form(mesh, dofs, b_terms, end);
  return ModelMatrices{std::move(A), std::move(B), std::move(dofs), mesh, bc};
}

BvpSolution solve_model_bvp(const CoefficientField& p, const CoefficientField& r, double alpha,
                            BoundaryKind bc, const CoefficientField& f, const Mesh& mesh) {
  DofMap dofs = DofMap::fourth_order(mesh, bc);
  const FormTerm a_terms[] = {{2, &p, 1.0}};
  Eigen::MatrixXd A = assemble_form(mesh, dofs, a_terms);

  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double a = mesh.node(e), b = mesh.node(e + 1);
    const ElementShapes shapes(dofs, e);
    double local[5] = {};
    integrate_pieces(a, b, merged_breakpoints(a, b, {&r, &f}), [&](double x, double w) {
      const HermiteShape s = hermite_shape(a, b, x);
      const double g = w * r.eval_clamped(x) * f.eval_clamped(x);
      for (std::size_t i = 0; i < shapes.slots.size(); ++i) local[i] += g * shapes.eval(i, s, 0, x);
    });
    for (std::size_t i = 0; i < shapes.slots.size(); ++i) load[shapes.slots[i]] += local[i];
  }
  if (bc == BoundaryKind::ClampedMassEnd) load[dofs.anchor()] += alpha * f.eval_clamped(1.0);

  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw NumericalError("model BVP stiffness is not positive definite");
  Eigen::VectorXd y = llt.solve(load);

  const double scale = load.cwiseAbs().maxCoeff();
  const double residual = scale > 0.0 ? (A * y - load).cwiseAbs().maxCoeff() / scale : 0.0;
  return BvpSolution{HermiteFunction(mesh, dofs.expand(y)), std::move(dofs), residual};
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

}  // namespace beampencil
