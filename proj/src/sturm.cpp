#include "beampencil/sturm.hpp"

#include <algorithm>
#include <cmath>

#include "beampencil/assembly.hpp"
#include "beampencil/hermite.hpp"

namespace beampencil {

namespace {

struct DirichletForms {
  Eigen::MatrixXd K;  // \int p u' v'
  Eigen::MatrixXd M;  // \int u v
};

DirichletForms dirichlet_forms(const CoefficientField& p, const Mesh& mesh) {
  const DofMap dofs = DofMap::second_order(mesh, BoundaryKind::ClampedClamped);
  const FormTerm k_terms[] = {{1, &p, 1.0}};
  const FormTerm m_terms[] = {{0, nullptr, 1.0}};
  return {assemble_form(mesh, dofs, k_terms), assemble_form(mesh, dofs, m_terms)};
}

double first_dirichlet_eigenvalue(const CoefficientField& p, const Mesh& mesh) {
  const DirichletForms f = dirichlet_forms(p, mesh);
  // eigenvalues of M relative to K are 1/lambda_k
  const Eigen::VectorXd nu = energy_eigenvalues(f.K, f.M);
  return 1.0 / nu[nu.size() - 1];
}

Eigen::VectorXd diagonal_scaling(const Eigen::MatrixXd& A) {
  Eigen::VectorXd s(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) s[i] = 1.0 / std::sqrt(std::abs(A(i, i)));
  return s;
}

// One RK4 step of  u' = q/p,  q' = -lambda u.
void rk4_step(const CoefficientField& p, double lambda, double x, double h, double& u, double& q) {
  auto f = [&](double xx, double uu, double qq, double& du, double& dq) {
    du = qq / p.eval_clamped(xx);
    dq = -lambda * uu;
  };
  double k1u, k1q, k2u, k2q, k3u, k3q, k4u, k4q;
  f(x, u, q, k1u, k1q);
  f(x + 0.5 * h, u + 0.5 * h * k1u, q + 0.5 * h * k1q, k2u, k2q);
  f(x + 0.5 * h, u + 0.5 * h * k2u, q + 0.5 * h * k2q, k3u, k3q);
  f(x + h, u + h * k3u, q + h * k3q, k4u, k4q);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
}

// Cubic Hermite on [a,b] from end values and slopes.
struct Cubic {
  double v, d;
};

Cubic hermite_cubic(double a, double b, double fa, double da, double fb, double db, double x) {
  const HermiteShape s = hermite_shape(a, b, x);
  return {fa * s.value[0] + da * s.value[1] + fb * s.value[2] + db * s.value[3],
          fa * s.d1[0] + da * s.d1[1] + fb * s.d1[2] + db * s.d1[3]};
}

}  // namespace

AdmissibleSet admissible_sup(const CoefficientField& p, const Mesh& mesh, const Tolerances& tol) {
  if (!p.uniformly_positive()) throw ConfigError("admissible set needs a uniformly positive p");
  Mesh current = mesh;
  double value = first_dirichlet_eigenvalue(p, current);
  AdmissibleSet out;
  for (int k = 0; k < 6; ++k) {
    Mesh finer = current.refined();
    const double next = first_dirichlet_eigenvalue(p, finer);
    out.drift = std::abs(next - value) / std::abs(next);
    value = next;
    current = std::move(finer);
    if (out.drift <= tol.admissible_rel) break;
  }
  out.sup_lambda = value;
  out.n_elements = current.n_elements();
  return out;
}

InertiaResult dirichlet_form_inertia(const CoefficientField& p, double lambda, const Mesh& mesh,
                                     const Tolerances& tol) {
  const DirichletForms f = dirichlet_forms(p, mesh);
  return symmetric_inertia(f.K - lambda * f.M, diagonal_scaling(f.K), tol.inertia_tau_rel);
}

std::size_t SigmaProfile::cell(double x) const {
  const std::size_t n = xs_.size() - 1;
  if (x <= 0.0) return 0;
  if (x >= 1.0) return n - 1;
  return std::min(n - 1, static_cast<std::size_t>(x * static_cast<double>(n)));
}

double SigmaProfile::sigma_at(double x) const {
  const std::size_t i = cell(x);
  const double a = xs_[i], b = xs_[i + 1];
  return hermite_cubic(a, b, sigma_[i], flux_[i] / p_.eval_clamped(a), sigma_[i + 1],
                       flux_[i + 1] / p_.eval_clamped(b), x)
      .v;
}

double SigmaProfile::dsigma_at(double x) const {
  const std::size_t i = cell(x);
  const double a = xs_[i], b = xs_[i + 1];
  const double q = hermite_cubic(a, b, flux_[i], -lambda_ * sigma_[i], flux_[i + 1],
                                 -lambda_ * sigma_[i + 1], x)
                       .v;
  return q / p_.eval_clamped(x);
}

double SigmaProfile::t_at(double x) const {
  const std::size_t i = cell(x);
  const double a = xs_[i], b = xs_[i + 1];
  return hermite_cubic(a, b, t_[i], sigma_[i] / omega_, t_[i + 1], sigma_[i + 1] / omega_, x).v;
}

double SigmaProfile::min_sigma() const { return *std::min_element(sigma_.begin(), sigma_.end()); }

double SigmaProfile::ode_residual() const {
  const std::size_t n = xs_.size() - 1;
  const double h = 1.0 / static_cast<double>(n);
  const double scale = *std::max_element(sigma_.begin(), sigma_.end());
  double worst = 0.0;
  // the three-point stencil errs by lambda^2 h^2 sigma / 6, which is not small
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double d = (flux_[i - 2] - 8.0 * flux_[i - 1] + 8.0 * flux_[i + 1] - flux_[i + 2]) / (12.0 * h);
    const double r = d + lambda_ * sigma_[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst / scale;
}

SigmaProfile sigma_solution(const CoefficientField& p, double lambda,
                            const AdmissibleSet& admissible, const Tolerances& tol) {
  const double margin = tol.sigma_margin_rel * std::max(1.0, std::abs(admissible.sup_lambda));
  if (!(lambda < admissible.sup_lambda - margin))
    throw ConfigError("lambda = " + std::to_string(lambda) +
                      " is outside the admissible set (sup " +
                      std::to_string(admissible.sup_lambda) + ")");

  std::size_t n = std::max<std::size_t>(tol.sigma_steps, 4000);
  if (n % 2) ++n;
  const double h = 1.0 / static_cast<double>(n);

  SigmaProfile out;
  out.lambda_ = lambda;
  out.p_ = p;
  out.xs_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.xs_[i] = static_cast<double>(i) * h;
  out.xs_[n] = 1.0;

  std::vector<double> u(n + 1), qu(n + 1), w(n + 1), qw(n + 1);
  u[0] = 0.0;
  qu[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i + 1] = u[i];
    qu[i + 1] = qu[i];
    rk4_step(p, lambda, out.xs_[i], h, u[i + 1], qu[i + 1]);
  }
  w[n] = 0.0;
  qw[n] = -1.0;
  for (std::size_t i = n; i > 0; --i) {
    w[i - 1] = w[i];
    qw[i - 1] = qw[i];
    rk4_step(p, lambda, out.xs_[i], -h, w[i - 1], qw[i - 1]);
  }
  for (std::size_t i = 1; i <= n; ++i)
    if (!(u[i] > 0.0))
      throw NumericalError("disconjugacy violated: left solution vanishes near x=" +
                           std::to_string(out.xs_[i]));
  for (std::size_t i = 0; i < n; ++i)
    if (!(w[i] > 0.0))
      throw NumericalError("disconjugacy violated: right solution vanishes near x=" +
                           std::to_string(out.xs_[i]));

  out.sigma_.resize(n + 1);
  out.flux_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    out.sigma_[i] = u[i] + w[i];
    out.flux_[i] = qu[i] + qw[i];
  }

  // \int sigma by the trapezoid rule with the endpoint-slope correction
  // (exact for cubics on each cell).
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double da = out.flux_[i] / p.eval_clamped(out.xs_[i]);
    const double db = out.flux_[i + 1] / p.eval_clamped(out.xs_[i + 1]);
    cum[i + 1] = cum[i] + 0.5 * h * (out.sigma_[i] + out.sigma_[i + 1]) + h * h / 12.0 * (da - db);
  }
  out.omega_ = cum[n];
  out.t_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.t_[i] = cum[i] / out.omega_;
  out.t_[n] = 1.0;
  return out;
}

ModelProblem transform_pencil(const ProblemSpec& spec, const SigmaProfile& profile) {
  const auto& xs = profile.xs();
  const auto& sg = profile.sigma();
  const double om = profile.omega();
  const double lambda = profile.lambda();
  std::vector<double> ts = profile.t();
  std::vector<double> ph(xs.size()), rh(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double s = sg[i];
    ph[i] = spec.p.eval_clamped(xs[i]) * s * s * s / (om * om * om);
    rh[i] = lambda * spec.c * spec.r.eval_clamped(xs[i]) * om / s;
  }
  ModelProblem out;
  out.p_hat = CoefficientField::table(ts, std::move(ph)).certified_positive("p_hat");
  out.r_hat = CoefficientField::table(std::move(ts), std::move(rh));
  out.alpha_term = lambda * spec.alpha;
  out.lambda = lambda;
  out.omega = om;
  return out;
}

double TestPolynomial::operator()(double t) const {
  double v = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) v = v * t + a[k];
  return v;
}

double TestPolynomial::d1(double t) const {
  double v = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) v = v * t + static_cast<double>(k) * a[k];
  return v;
}

double TestPolynomial::d2(double t) const {
  double v = 0.0;
  for (std::size_t k = a.size(); k-- > 2;) v = v * t + static_cast<double>(k * (k - 1)) * a[k];
  return v;
}

double CongruenceSample::defect() const {
  return std::abs(pencil_form - model_form) / std::max(energy, 1e-300);
}

CongruenceSample congruence_sample(const ProblemSpec& spec, const SigmaProfile& profile,
                                   const ModelProblem& model, const TestPolynomial& y) {
  const double lambda = profile.lambda();
  const double om = profile.omega();
  const double end = spec.bc == BoundaryKind::ClampedMassEnd ? spec.alpha : 0.0;
  CongruenceSample out;

  // x side: z(x) = y(t(x))
  const auto& xs = profile.xs();
  double pencil = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = xs[i], b = xs[i + 1];
    integrate_pieces(a, b, merged_breakpoints(a, b, {&spec.p, &spec.r}), [&](double x, double wq) {
      const double s = profile.sigma_at(x), ds = profile.dsigma_at(x), t = profile.t_at(x);
      const double tp = s / om, tpp = ds / om;
      const double z1 = y.d1(t) * tp;
      const double z2 = y.d2(t) * tp * tp + y.d1(t) * tpp;
      const double z0 = y(t);
      pencil += wq * (spec.p.eval_clamped(x) * z2 * z2 -
                      lambda * (z1 * z1 + spec.c * spec.r.eval_clamped(x) * z0 * z0));
    });
  }
  const double y1 = y(1.0);
  out.pencil_form = pencil - lambda * end * y1 * y1;

  // t side, exact on every table piece
  const auto& ts = model.p_hat.table_xs();
  double model_form = 0.0, energy = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    integrate_pieces(ts[i], ts[i + 1], {}, [&](double t, double wq) {
      const double y2 = y.d2(t), y0 = y(t);
      const double e = wq * model.p_hat.eval_clamped(t) * y2 * y2;
      energy += e;
      model_form += e - wq * model.r_hat.eval_clamped(t) * y0 * y0;
    });
  }
  out.model_form = model_form - model.alpha_term * y1 * y1;
  out.energy = energy;
  return out;
}

Mesh model_mesh(const SigmaProfile& profile, const Mesh& x_mesh) {
  const Mesh fine = x_mesh.refined();
  std::vector<double> t(fine.n_nodes());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = profile.t_at(fine.node(i));
  t.front() = 0.0;
  t.back() = 1.0;
  return Mesh::from_nodes(std::move(t));
}

double model_singularity(const ModelProblem& model, BoundaryKind bc, const Mesh& mesh) {
  const ModelMatrices m = assemble_model(model.p_hat, model.r_hat, model.alpha_term, bc, mesh);
  const Eigen::VectorXd ev = energy_eigenvalues(m.A_hat, m.A_hat - m.B_hat);
  return ev.cwiseAbs().minCoeff();
}

SlCount sl_negative_count(const ProblemSpec& spec, const Mesh& mesh, const Tolerances& tol) {
  const DofMap dofs = DofMap::second_order(mesh, spec.bc);
  const FormTerm k_terms[] = {{1, nullptr, 1.0}, {0, &spec.r, spec.c}};
  const FormTerm m_terms[] = {{0, nullptr, 1.0}};
  const double end = spec.bc == BoundaryKind::ClampedMassEnd ? spec.alpha : 0.0;
  const Eigen::MatrixXd K = assemble_form(mesh, dofs, k_terms, end);
  const Eigen::MatrixXd M = assemble_form(mesh, dofs, m_terms);
  const Eigen::VectorXd ev = energy_eigenvalues(M, K);

  SlCount out;
  // the top of the discrete spectrum grows like h^-2; scale by the bottom instead
  out.tau = tol.inertia_tau_rel * std::max(1.0, std::abs(ev[0]));
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev[k] < -out.tau) {
      ++out.count;
      out.negative_eigenvalues.push_back(ev[k]);
    }
  }
  return out;
}

}  // namespace beampencil
