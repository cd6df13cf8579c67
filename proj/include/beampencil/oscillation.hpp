#pragma once

#include <array>
#include <string>
#include <vector>

#include "beampencil/assembly.hpp"
#include "beampencil/problem.hpp"
#include "beampencil/spectrum.hpp"
#include "beampencil/tolerances.hpp"

namespace beampencil {

struct SignChangeCount {
  std::size_t count = 0;
  bool degenerate = false;  // every sample inside the dead band
};

/// Quantize to {-,0,+} with dead band `value_tol` (absolute), drop the zeros,
/// count adjacent flips.
SignChangeCount count_sign_changes(const std::vector<double>& samples, double value_tol);

struct Zero {
  double x = 0.0;
  bool simple = true;
  double slope = 0.0;  // y'(x) / max|y'|
};

struct ZeroReport {
  std::vector<Zero> zeros;        // strictly inside (0,1), sorted
  std::size_t sign_changes = 0;   // of the samples
  double value_tol = 0.0;         // relative to max|y|
  double deriv_tol = 0.0;         // relative to max|y'|
  std::vector<std::string> warnings;

  std::size_t simple_count() const;
  bool all_simple() const;
};

/// Interior zeros of a C^1 Hermite function sampled at `samples` uniform
/// points: sign-change brackets refined by bisection, plus touching zeros
/// (dead-band runs between samples of one sign), which are never simple.
ZeroReport locate_zeros(const HermiteFunction& fn, std::size_t samples, double value_tol,
                        double deriv_tol);
ZeroReport locate_zeros(const EigenfunctionSample& fn, double value_tol, double deriv_tol);

enum class ConeDirection { Forward, Backward };

/// (y, y', p y'', (p y'')') at a.
struct ConeState {
  double a = 0.0;
  std::array<double, 4> q{};
  ConeDirection direction = ConeDirection::Forward;

  /// Forward: all four >= 0; backward: signs (+,-,+,-) weakly; not all zero.
  bool in_cone() const;
};

struct DisconjugacyResult {
  std::array<double, 4> end{};  // quadruple at 1 (forward) or 0 (backward)
  bool pass = false;            // strict sign pattern at the far end
  std::size_t steps = 0;
};

/// RK4 for (p y'')'' = r y as y' = y1, y1' = v/p, v' = w, w' = r y, fixed step
/// tol.rk4_step. Throws ConfigError for the zero state or a state outside its cone.
DisconjugacyResult disconjugacy_check(const CoefficientField& p, const CoefficientField& r,
                                      const ConeState& state, const Tolerances& tol = {});

struct SignChangeTrial {
  std::size_t k_in = 0;
  std::size_t k_out = 0;
  bool pass = false;
  double weak_residual = 0.0;
};

/// Solves (p y'')'' = r f with the conditions of spec.bc (and the end load
/// alpha f(1) for the mass end) and compares sign changes of f and y on
/// (0,1). Throws ConfigError for alpha < 0 or degree > 12.
SignChangeTrial signchange_noninc_check(const ProblemSpec& spec, const std::vector<double>& f,
                                        const Mesh& mesh, std::size_t samples = 2001,
                                        const Tolerances& tol = {});

}  // namespace beampencil
