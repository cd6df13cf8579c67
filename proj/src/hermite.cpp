#include "beampencil/hermite.hpp"

#include <algorithm>

namespace beampencil {

HermiteShape hermite_shape(double a, double b, double x) {
  const double h = b - a;
  const double s = (x - a) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  HermiteShape out;
  out.value = {1.0 - 3.0 * s2 + 2.0 * s3, h * (s - 2.0 * s2 + s3), 3.0 * s2 - 2.0 * s3,
               h * (s3 - s2)};
  out.d1 = {(-6.0 * s + 6.0 * s2) / h, 1.0 - 4.0 * s + 3.0 * s2, (6.0 * s - 6.0 * s2) / h,
            3.0 * s2 - 2.0 * s};
  out.d2 = {(-6.0 + 12.0 * s) / (h * h), (-4.0 + 6.0 * s) / h, (6.0 - 12.0 * s) / (h * h),
            (6.0 * s - 2.0) / h};
  out.d3 = {12.0 / (h * h * h), 6.0 / (h * h), -12.0 / (h * h * h), 6.0 / (h * h)};
  return out;
}

std::vector<double> merged_breakpoints(double a, double b,
                                       std::initializer_list<const CoefficientField*> fields) {
  std::vector<double> out;
  for (const CoefficientField* f : fields) {
    if (f == nullptr) continue;
    auto more = f->breakpoints_in(a, b);
    out.insert(out.end(), more.begin(), more.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DofMap::DofMap(std::size_t n_nodes, std::vector<std::size_t> constrained)
    : global_to_free_(2 * n_nodes, 0) {
  for (std::size_t g : constrained) global_to_free_.at(g) = -1;
  for (std::size_t g = 0; g < global_to_free_.size(); ++g) {
    if (global_to_free_[g] < 0) continue;
    global_to_free_[g] = static_cast<long>(n_free_++);
  }
}

DofMap with_end_anchor(DofMap base, const Mesh& mesh) {
  const std::size_t end_value = 2 * (mesh.n_nodes() - 1);
  if (base.global_to_free_[end_value] < 0) return base;
  base.global_to_free_[end_value] = -1;
  base.n_free_ = 0;
  for (long& f : base.global_to_free_)
    if (f >= 0) f = static_cast<long>(base.n_free_++);
  base.anchor_ = static_cast<long>(base.n_free_++);
  base.nodes_ = mesh.nodes();
  return base;
}

DofMap DofMap::fourth_order(const Mesh& mesh, BoundaryKind bc) {
  check_mesh_for(mesh, bc);
  const std::size_t last = mesh.n_nodes() - 1;
  if (bc == BoundaryKind::ClampedClamped)
    return DofMap(mesh.n_nodes(), {0, 1, 2 * last, 2 * last + 1});
  return with_end_anchor(DofMap(mesh.n_nodes(), {0, 1, 2 * last + 1}), mesh);
}

DofMap DofMap::second_order(const Mesh& mesh, BoundaryKind bc) {
  const std::size_t last = mesh.n_nodes() - 1;
  if (bc == BoundaryKind::ClampedClamped) return DofMap(mesh.n_nodes(), {0, 2 * last});
  return DofMap(mesh.n_nodes(), {0});
}

std::vector<DofMap::Term> DofMap::terms(std::size_t global) const {
  std::vector<Term> out;
  const long f = global_to_free_[global];
  if (f >= 0) out.push_back({f, 1.0});
  if (anchor_ >= 0) {
    const double x = nodes_[global / 2];
    const double phi = global % 2 == 0 ? anchor_value(x) : anchor_d1(x);
    if (phi != 0.0) out.push_back({anchor_, phi});
  }
  return out;
}

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& free) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(global_size()));
  for (std::size_t g = 0; g < global_size(); ++g)
    for (const Term& t : terms(g)) out[static_cast<Eigen::Index>(g)] += t.coefficient * free[t.free];
  return out;
}

Eigen::VectorXd DofMap::restrict(const Eigen::VectorXd& global) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  const double end = anchor_ >= 0 ? global[static_cast<Eigen::Index>(global_size() - 2)] : 0.0;
  if (anchor_ >= 0) out[anchor_] = end;
  for (std::size_t g = 0; g < global_size(); ++g) {
    const long f = global_to_free_[g];
    if (f < 0) continue;
    double v = global[static_cast<Eigen::Index>(g)];
    if (anchor_ >= 0) {
      const double x = nodes_[g / 2];
      v -= end * (g % 2 == 0 ? anchor_value(x) : anchor_d1(x));
    }
    out[f] = v;
  }
  return out;
}

HermiteFunction::HermiteFunction(Mesh mesh, Eigen::VectorXd global_coefficients)
    : mesh_(std::move(mesh)), coeffs_(std::move(global_coefficients)) {
  if (coeffs_.size() != static_cast<Eigen::Index>(2 * mesh_.n_nodes()))
    throw std::invalid_argument("Hermite coefficient vector does not match the mesh");
}

HermitePoint HermiteFunction::on_element(std::size_t e, double x) const {
  const HermiteShape s = hermite_shape(mesh_.node(e), mesh_.node(e + 1), x);
  HermitePoint out;
  for (std::size_t k = 0; k < 4; ++k) {
    const double c = coeffs_[static_cast<Eigen::Index>(2 * e + k)];
    out.y += c * s.value[k];
    out.dy += c * s.d1[k];
    out.ddy += c * s.d2[k];
    out.d3y += c * s.d3[k];
  }
  return out;
}

HermitePoint HermiteFunction::operator()(double x) const {
  return on_element(mesh_.locate(x), x);
}

}  // namespace beampencil
