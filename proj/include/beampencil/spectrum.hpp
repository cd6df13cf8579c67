#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beampencil/assembly.hpp"
#include "beampencil/tolerances.hpp"

namespace beampencil {

/// R = -L^{-1} B L^{-T} with A = L L^T. A pencil value lambda != 0 is an
/// eigenvalue of A - lambda B iff mu = -1/lambda is an eigenvalue of R.
struct ReducedMatrix {
  Eigen::MatrixXd R;
  /// Lower-triangular Cholesky factor of A.
  Eigen::MatrixXd L;
  /// ||L R L^T + B||_F / ||B||_F (absolute when B = 0).
  double reconstruction_defect = 0.0;
};

/// Throws NumericalError when A is not positive definite. A is Jacobi-scaled
/// before factorization; in exact arithmetic R does not depend on the scaling.
ReducedMatrix reduce(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
inline ReducedMatrix reduce(const PencilMatrices& m) { return reduce(m.A, m.B); }

struct SpectralEntry {
  double lambda = 0.0;
  /// Free-DOF eigenvector with v^T A v = 1.
  Eigen::VectorXd vector;
  bool converged = false;
  /// |lambda(n) - lambda(2n)| / |lambda(2n)|; NaN when not checked.
  double drift = std::numeric_limits<double>::quiet_NaN();
};

/// Negatives are ordered lambda_{-1} > lambda_{-2} > ... (outwards from 0),
/// positives lambda_1 < lambda_2 < ... . Index n on either branch is entry n-1.
struct Spectrum {
  std::vector<SpectralEntry> negatives;
  std::vector<SpectralEntry> positives;
  std::size_t converged_negatives = 0;  // leading run of converged entries
  std::size_t converged_positives = 0;
  std::size_t kernel_dimension = 0;     // mu cut by the floor (ker B)
  double mu_floor = 0.0;
  /// Branch sizes on mesh.refined(); -1 when no comparison was run.
  long refined_negatives = -1;
  long refined_positives = -1;
  Mesh mesh;
  DofMap dofs;
  BoundaryKind bc;

  /// Signed index: -n selects lambda_{-n}, +n selects lambda_n.
  const SpectralEntry& at(int signed_index) const;
  bool has(int signed_index) const;
};

/// Spectrum of the discrete pencil without convergence information.
Spectrum pencil_spectrum(const PencilMatrices& m, const Tolerances& tol = {});

/// Spectrum on `mesh` with convergence flags from a comparison against
/// `mesh.refined()`.
Spectrum compute_spectrum(const ProblemSpec& spec, const Mesh& mesh, const Tolerances& tol = {});

struct InertiaResult {
  std::size_t index = 0;
  bool near_singular = false;
  double tau = 0.0;
  double min_abs_eigenvalue = 0.0;
};

/// Number of eigenvalues below -tau of diag(s) M diag(s), tau = rel_tau *
/// ||diag(s) M diag(s)||_2. By Sylvester's law this is the negative inertia
/// of M for any positive scaling s.
InertiaResult symmetric_inertia(const Eigen::MatrixXd& M, const Eigen::VectorXd& s,
                                double rel_tau);

/// ind T(lambda): negative inertia of A - lambda B, read from the congruent
/// matrix L^{-1} (A - lambda B) L^{-T} (A = L L^T), whose eigenvalues are
/// bounded below by -|lambda| ||L^{-1} B L^{-T}|| and stay well separated from
/// tau on graded meshes. A fresh factorization and eigen-solve per lambda;
/// nothing is read from a stored spectrum.
InertiaResult inertia_index(const PencilMatrices& m, double lambda, const Tolerances& tol = {});

/// Dense samples of an eigenfunction, A-normalized, sign fixed by y''(0) > 0.
struct EigenfunctionSample {
  int index = 0;
  double lambda = 0.0;
  std::vector<double> xs, y, dy, ddy;
  HermiteFunction fn;
  /// Deviation from linearity of  w = p y'' + lambda y - lambda c \int_0^x r y (x-t) dt,
  /// relative to max|p y''|. Zero for classical solutions.
  double strong_residual = 0.0;
  /// clamped_mass_end only: |(p y'')'(1) + lambda alpha y(1)| / max|y|, with the
  /// flux recovered weakly and, separately, from the last element.
  std::optional<double> natural_defect;
  std::optional<double> natural_defect_element;

  double max_abs_y() const;
  double max_abs_dy() const;
};

EigenfunctionSample reconstruct_eigenfunction(const Spectrum& spectrum, int signed_index,
                                              const ProblemSpec& spec, std::size_t samples,
                                              bool require_converged = true);

/// Eigenvalues of L^{-1} M L^{-T} (A = L L^T), ascending: the singular values of
/// M measured in the A-energy norm, up to sign.
Eigen::VectorXd energy_eigenvalues(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

}  // namespace beampencil
