#include "beampencil/oscillation.hpp"

#include <algorithm>
#include <cmath>

namespace beampencil {

SignChangeCount count_sign_changes(const std::vector<double>& samples, double value_tol) {
  if (samples.size() < 2) throw ConfigError("sign-change count needs at least 2 samples");
  SignChangeCount out;
  int last = 0;
  for (double v : samples) {
    const int s = v > value_tol ? 1 : (v < -value_tol ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++out.count;
    last = s;
  }
  out.degenerate = last == 0;
  return out;
}

std::size_t ZeroReport::simple_count() const {
  return static_cast<std::size_t>(
      std::count_if(zeros.begin(), zeros.end(), [](const Zero& z) { return z.simple; }));
}

bool ZeroReport::all_simple() const { return simple_count() == zeros.size(); }

ZeroReport locate_zeros(const HermiteFunction& fn, std::size_t samples, double value_tol,
                        double deriv_tol) {
  if (samples < 3) throw ConfigError("zero location needs at least 3 samples");
  const double step = 1.0 / static_cast<double>(samples - 1);
  std::vector<double> xs(samples), ys(samples);
  double ymax = 0.0, dymax = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = i + 1 == samples ? 1.0 : static_cast<double>(i) * step;
    const HermitePoint pt = fn(xs[i]);
    ys[i] = pt.y;
    ymax = std::max(ymax, std::abs(pt.y));
    dymax = std::max(dymax, std::abs(pt.dy));
  }

  ZeroReport out;
  out.value_tol = value_tol;
  out.deriv_tol = deriv_tol;
  if (ymax == 0.0) {
    out.warnings.push_back("function vanishes identically");
    return out;
  }
  const double band = value_tol * ymax;
  out.sign_changes = count_sign_changes(ys, band).count;

  auto sign = [&](double v) { return v > band ? 1 : (v < -band ? -1 : 0); };
  auto make_zero = [&](double x, bool simple) {
    const double slope = fn(x).dy / (dymax > 0.0 ? dymax : 1.0);
    return Zero{x, simple && std::abs(slope) >= deriv_tol, slope};
  };

  std::vector<Zero> found;
  long prev = -1;
  for (std::size_t i = 0; i < samples; ++i) {
    const int s = sign(ys[i]);
    if (s == 0) continue;
    if (prev < 0) {
      if (i > 1 && xs[i - 1] > 2.0 * step)
        out.warnings.push_back("function inside the dead band on [0, " +
                               std::to_string(xs[i - 1]) + "]");
    } else {
      const auto p = static_cast<std::size_t>(prev);
      if (s != sign(ys[p])) {
        double lo = xs[p], hi = xs[i];
        const double slo = ys[p];
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double v = fn(mid).y;
          if (std::abs(v) <= 1e-12 * ymax) {
            lo = hi = mid;
            break;
          }
          ((v > 0.0) == (slo > 0.0) ? lo : hi) = mid;
        }
        found.push_back(make_zero(0.5 * (lo + hi), true));
      } else if (i - p > 1) {
        // dead-band run between samples of one sign: a touching zero
        std::size_t k = p + 1;
        for (std::size_t j = p + 1; j < i; ++j)
          if (std::abs(ys[j]) < std::abs(ys[k])) k = j;
        found.push_back(make_zero(xs[k], false));
      }
    }
    prev = static_cast<long>(i);
  }
  if (prev >= 0 && samples - 1 - static_cast<std::size_t>(prev) > 2)
    out.warnings.push_back("function inside the dead band on [" +
                           std::to_string(xs[static_cast<std::size_t>(prev) + 1]) + ", 1]");

  // boundary zeros are boundary conditions, not interior zeros
  std::vector<Zero> interior;
  for (const Zero& z : found) {
    if (z.x < step || z.x > 1.0 - step) {
      out.warnings.push_back("zero at x=" + std::to_string(z.x) + " next to the boundary excluded");
      continue;
    }
    interior.push_back(z);
  }

  for (const Zero& z : interior) {
    if (!out.zeros.empty() && z.x - out.zeros.back().x < 2.0 / static_cast<double>(samples)) {
      Zero& m = out.zeros.back();
      m.x = 0.5 * (m.x + z.x);
      m.simple = false;
      out.warnings.push_back("clustered zeros merged near x=" + std::to_string(m.x));
      continue;
    }
    out.zeros.push_back(z);
  }
  return out;
}

ZeroReport locate_zeros(const EigenfunctionSample& fn, double value_tol, double deriv_tol) {
  return locate_zeros(fn.fn, std::max<std::size_t>(fn.xs.size(), 3), value_tol, deriv_tol);
}

bool ConeState::in_cone() const {
  if (std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; })) return false;
  if (direction == ConeDirection::Forward)
    return std::all_of(q.begin(), q.end(), [](double v) { return v >= 0.0; });
  return q[0] >= 0.0 && q[1] <= 0.0 && q[2] >= 0.0 && q[3] <= 0.0;
}

DisconjugacyResult disconjugacy_check(const CoefficientField& p, const CoefficientField& r,
                                      const ConeState& state, const Tolerances& tol) {
  if (std::all_of(state.q.begin(), state.q.end(), [](double v) { return v == 0.0; }))
    throw ConfigError("initial quadruple is zero (trivial solution)");
  if (!state.in_cone()) throw ConfigError("initial quadruple is outside its cone");
  if (!(state.a >= 0.0 && state.a <= 1.0)) throw DomainError("base point outside [0,1]");
  const bool forward = state.direction == ConeDirection::Forward;
  if (forward && state.a >= 1.0) throw DomainError("forward cone needs a in [0,1)");
  if (!forward && state.a <= 0.0) throw DomainError("backward cone needs a in (0,1]");

  const double far = forward ? 1.0 : 0.0;
  const auto n = static_cast<std::size_t>(std::ceil(std::abs(far - state.a) / tol.rk4_step - 1e-9));
  const double h = (far - state.a) / static_cast<double>(n);

  using Q = std::array<double, 4>;
  auto rhs = [&](double x, const Q& s) {
    return Q{s[1], s[2] / p.eval_clamped(x), s[3], r.eval_clamped(x) * s[0]};
  };
  auto axpy = [](const Q& s, double k, const Q& d) {
    return Q{s[0] + k * d[0], s[1] + k * d[1], s[2] + k * d[2], s[3] + k * d[3]};
  };

  Q s = state.q;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = state.a + static_cast<double>(i) * h;
    const Q k1 = rhs(x, s);
    const Q k2 = rhs(x + 0.5 * h, axpy(s, 0.5 * h, k1));
    const Q k3 = rhs(x + 0.5 * h, axpy(s, 0.5 * h, k2));
    const Q k4 = rhs(x + h, axpy(s, h, k3));
    for (int j = 0; j < 4; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }

  DisconjugacyResult out;
  out.end = s;
  out.steps = n;
  out.pass = forward ? (s[0] > 0.0 && s[1] > 0.0 && s[2] > 0.0 && s[3] > 0.0)
                     : (s[0] > 0.0 && s[1] < 0.0 && s[2] > 0.0 && s[3] < 0.0);
  return out;
}

SignChangeTrial signchange_noninc_check(const ProblemSpec& spec, const std::vector<double>& f,
                                        const Mesh& mesh, std::size_t samples,
                                        const Tolerances& tol) {
  if (spec.alpha < 0.0) throw ConfigError("sign-change test needs alpha >= 0");
  if (f.empty() || f.size() > 13) throw ConfigError("load polynomial must have degree <= 12");
  const CoefficientField load = CoefficientField::polynomial(f);
  const BvpSolution sol = solve_model_bvp(spec.p, spec.r, spec.alpha, spec.bc, load, mesh);

  const double step = 1.0 / static_cast<double>(samples - 1);
  std::vector<double> fs(samples), ys(samples);
  double fmax = 0.0, ymax = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = i + 1 == samples ? 1.0 : static_cast<double>(i) * step;
    fs[i] = load(x);
    ys[i] = sol.y(x).y;
    fmax = std::max(fmax, std::abs(fs[i]));
    ymax = std::max(ymax, std::abs(ys[i]));
  }
  SignChangeTrial out;
  out.k_in = count_sign_changes(fs, tol.value_tol * fmax).count;
  out.k_out = count_sign_changes(ys, tol.value_tol * ymax).count;
  out.pass = out.k_out <= out.k_in;
  out.weak_residual = sol.weak_residual;
  return out;
}

}  // namespace beampencil
