#pragma once

#include <cstddef>

namespace beampencil {

/// Every threshold used by the solvers and the theorem checks. Config files
/// may override individual members under the "tolerances" key.
struct Tolerances {
  // problem
  std::size_t positivity_scan_points = 10001;

  // eigen
  double mu_floor_rel = 1e-12;        // |mu| <= floor * ||R|| is treated as ker B
  double converged_drift_rel = 1e-4;  // n -> 2n relative drift for "converged"
  double inertia_tau_rel = 1e-10;     // tau = rel * ||M|| in inertia counts
  double simplicity_gap_rel = 1e-6;
  double kernel_ratio = 1e3;          // second / first singular value

  // sturm
  double admissible_rel = 1e-6;       // mesh-doubling stop for lambda*(p)
  double sigma_margin_rel = 1e-9;     // lambda must stay below lambda* by this
  std::size_t sigma_steps = 16000;    // RK4 steps for the sigma IVPs
  double sigma_residual_rel = 1e-6;
  double congruence_rel = 1e-6;
  double kernel_singular = 1e-6;

  // oscillation
  double value_tol = 1e-9;   // dead band, relative to max|y|
  double deriv_tol = 1e-5;   // simple-zero threshold, relative to max|y'|
  double rk4_step = 1e-4;

  // verify
  double interlacing_gap_rel = 1e-8;
};

}  // namespace beampencil
