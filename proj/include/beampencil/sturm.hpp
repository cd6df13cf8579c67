#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beampencil/problem.hpp"
#include "beampencil/spectrum.hpp"
#include "beampencil/tolerances.hpp"

namespace beampencil {

/// Lambda(p) = (-inf, sup_lambda): where \int p|y'|^2 - lambda|y|^2 is positive
/// definite on H^1_0. sup_lambda is the first Dirichlet eigenvalue of -(p y')'.
struct AdmissibleSet {
  double sup_lambda = 0.0;
  std::size_t n_elements = 0;  // finest mesh used
  double drift = 0.0;          // last relative change under doubling

  bool contains(double lambda) const { return lambda < sup_lambda; }
};

/// Starts on `mesh` and doubles until the estimate moves by at most
/// tol.admissible_rel (at most six doublings).
AdmissibleSet admissible_sup(const CoefficientField& p, const Mesh& mesh,
                             const Tolerances& tol = {});

/// Negative inertia of \int p|y'|^2 - lambda|y|^2 on the Dirichlet space.
InertiaResult dirichlet_form_inertia(const CoefficientField& p, double lambda, const Mesh& mesh,
                                     const Tolerances& tol = {});

/// sigma = u + w on a uniform grid, with -(p u')' = lambda u, u(0)=0, (pu')(0)=1 and
/// -(p w')' = lambda w, w(1)=0, (pw')(1)=-1; both by fixed-step RK4.
class SigmaProfile {
 public:
  double lambda() const { return lambda_; }
  double omega() const { return omega_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& sigma() const { return sigma_; }
  const std::vector<double>& flux() const { return flux_; }  // p sigma'
  const std::vector<double>& t() const { return t_; }

  /// Cubic Hermite interpolation between grid points.
  double sigma_at(double x) const;
  double dsigma_at(double x) const;
  double t_at(double x) const;

  double min_sigma() const;
  /// max |(p sigma')' + lambda sigma| / max sigma over interior points,
  /// by five-point central differences of the flux.
  double ode_residual() const;

  /// Identifies the fixed gauge choice for output metadata.
  static constexpr const char* gauge = "u+w";

 private:
  friend SigmaProfile sigma_solution(const CoefficientField&, double, const AdmissibleSet&,
                                     const Tolerances&);
  double lambda_ = 0.0;
  double omega_ = 1.0;
  std::vector<double> xs_, sigma_, flux_, t_;
  CoefficientField p_ = CoefficientField::constant(1.0);

  std::size_t cell(double x) const;
};

/// Throws ConfigError when lambda is not inside Lambda(p) by the configured
/// margin, NumericalError("disconjugacy violated") when a one-sided solution
/// fails to stay positive.
SigmaProfile sigma_solution(const CoefficientField& p, double lambda,
                            const AdmissibleSet& admissible, const Tolerances& tol = {});

/// Coefficients of the model form obtained by the substitution x -> t(x):
///   <T_hat y, y> = \int p_hat |y''|^2 - r_hat |y|^2 dt - alpha_term |y(1)|^2.
struct ModelProblem {
  CoefficientField p_hat = CoefficientField::constant(1.0);
  CoefficientField r_hat = CoefficientField::constant(0.0);
  double alpha_term = 0.0;  // lambda * alpha
  double lambda = 0.0;
  double omega = 1.0;
};

ModelProblem transform_pencil(const ProblemSpec& spec, const SigmaProfile& profile);

/// Polynomial test function y(t) = sum a_k t^k on [0,1].
struct TestPolynomial {
  std::vector<double> a;
  double operator()(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

/// Result of comparing <T(lambda) z, z> with the model form at y, z = y(t(x)).
struct CongruenceSample {
  double pencil_form = 0.0;  // <T(lambda) z, z>
  double model_form = 0.0;   // \int p_hat y''^2 - r_hat y^2 - lambda alpha y(1)^2
  double energy = 0.0;       // \int p_hat y''^2
  double defect() const;     // |pencil - model| / energy
};

CongruenceSample congruence_sample(const ProblemSpec& spec, const SigmaProfile& profile,
                                   const ModelProblem& model, const TestPolynomial& y);

/// Random test polynomial meeting the essential conditions of `bc`
/// (degree <= 6 so the model-side quadrature is exact on each table piece).
template <typename Rng>
TestPolynomial random_test_polynomial(BoundaryKind bc, Rng& rng);

/// Image under t of x_mesh.refined(): the model coefficients vary like sigma^3,
/// so the model is discretized where the pencil mesh puts its resolution.
Mesh model_mesh(const SigmaProfile& profile, const Mesh& x_mesh);

/// Smallest |eigenvalue| of A_hat^{-1/2} (A_hat - B_hat) A_hat^{-1/2} for the
/// model matrices at `model`: zero iff the model form is singular.
double model_singularity(const ModelProblem& model, BoundaryKind bc, const Mesh& mesh);

/// Negative index of \int |y'|^2 + c r |y|^2 (+ alpha |y(1)|^2 for the mass end)
/// on H^1_0 (clamped_clamped) or {y(0)=0} (clamped_mass_end).
struct SlCount {
  std::size_t count = 0;
  std::vector<double> negative_eigenvalues;  // of -y'' + c r y = mu y, ascending
  double tau = 0.0;  // inertia_tau_rel * max(1, |lowest eigenvalue|)
};

SlCount sl_negative_count(const ProblemSpec& spec, const Mesh& mesh, const Tolerances& tol = {});

// -- template implementation ---------------------------------------------

template <typename Rng>
TestPolynomial random_test_polynomial(BoundaryKind bc, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  // t^2 (1-t)^2 (q0 + q1 t + q2 t^2)
  const double q0 = normal(rng), q1 = normal(rng), q2 = normal(rng);
  const double base[5] = {0.0, 0.0, 1.0, -2.0, 1.0};
  const double q[3] = {q0, q1, q2};
  TestPolynomial y{std::vector<double>(7, 0.0)};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) y.a[static_cast<std::size_t>(i + j)] += base[i] * q[j];
  if (bc == BoundaryKind::ClampedMassEnd) {
    const double beta = normal(rng);  // beta (3t^2 - 2t^3): y(1) = beta, y'(1) = 0
    y.a[2] += 3.0 * beta;
    y.a[3] -= 2.0 * beta;
  }
  return y;
}

}  // namespace beampencil
