#pragma once

// Reference values computed without the library: characteristic equations,
// shooting on the ODEs, closed forms.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13) {
  double fa = f(a);
  for (int it = 0; it < 300 && b - a > tol * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Roots lambda = mu^2 of 2 - 2 cos mu - mu sin mu = 0 (clamped-clamped
/// buckling, p = r = 1, c = 0), ascending.
inline std::vector<double> buckling_eigenvalues(std::size_t count) {
  auto g = [](double mu) { return 2.0 - 2.0 * std::cos(mu) - mu * std::sin(mu); };
  std::vector<double> out;
  for (double mu = 1.0; out.size() < count; mu += 1e-3) {
    if ((g(mu) > 0) != (g(mu + 1e-3) > 0)) {
      const double r = bisect(g, mu, mu + 1e-3, 1e-15);
      out.push_back(r * r);
    }
  }
  return out;
}

/// Determinant whose zeros are the eigenvalues of
///   y'''' + lambda y'' - lambda c y = 0,  y(0) = y'(0) = 0,
/// with y(1) = y'(1) = 0 (mass_end = false) or y'(1) = 0,
/// y'''(1) + lambda alpha y(1) = 0 (mass_end = true). RK4 shooting.
inline double pencil_determinant(double lambda, double c, double alpha, bool mass_end,
                                 int steps = 4000) {
  using S = std::array<double, 4>;
  auto shoot = [&](S s) {
    const double h = 1.0 / steps;
    auto f = [&](const S& y) { return S{y[1], y[2], y[3], -lambda * y[2] + lambda * c * y[0]}; };
    for (int i = 0; i < steps; ++i) {
      S k1 = f(s), t;
      for (int j = 0; j < 4; ++j) t[j] = s[j] + 0.5 * h * k1[j];
      S k2 = f(t);
      for (int j = 0; j < 4; ++j) t[j] = s[j] + 0.5 * h * k2[j];
      S k3 = f(t);
      for (int j = 0; j < 4; ++j) t[j] = s[j] + h * k3[j];
      S k4 = f(t);
      for (int j = 0; j < 4; ++j) s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return s;
  };
  const S u = shoot({0, 0, 1, 0}), v = shoot({0, 0, 0, 1});
  if (!mass_end) return u[0] * v[1] - v[0] * u[1];
  const double bu = u[3] + lambda * alpha * u[0], bv = v[3] + lambda * alpha * v[0];
  return u[1] * bv - v[1] * bu;
}

/// Clamped-clamped characteristic function for p = r = 1, lambda < 0, c < 0.
/// s^4 + lambda s^2 - lambda c = 0 has roots +-a, +-ib; eliminating the
/// conditions at 0 leaves 2ab(1 - cosh a cos b) + (a^2 - b^2) sinh a sin b,
/// returned divided by cosh a.
inline double clamped_characteristic(double lambda, double c) {
  const double root = std::sqrt(lambda * lambda + 4.0 * lambda * c);
  const double a = std::sqrt((-lambda + root) / 2.0), b = std::sqrt((lambda + root) / 2.0);
  return 2.0 * a * b * (1.0 / std::cosh(a) - std::cos(b)) + (a * a - b * b) * std::tanh(a) * std::sin(b);
}

/// First Dirichlet eigenvalue of -(p u')' = lambda u by shooting on (u, p u')
/// and bisection of u(1) over [lo, hi].
inline double dirichlet_first(const std::function<double(double)>& p, double lo, double hi,
                              int steps = 20000) {
  auto end_value = [&](double lambda) {
    double u = 0.0, q = 1.0;
    const double h = 1.0 / steps;
    auto f = [&](double x, double uu, double qq, double& du, double& dq) {
      du = qq / p(x);
      dq = -lambda * uu;
    };
    for (int i = 0; i < steps; ++i) {
      const double x = i * h;
      double a1, b1, a2, b2, a3, b3, a4, b4;
      f(x, u, q, a1, b1);
      f(x + h / 2, u + h / 2 * a1, q + h / 2 * b1, a2, b2);
      f(x + h / 2, u + h / 2 * a2, q + h / 2 * b2, a3, b3);
      f(x + h, u + h * a3, q + h * b3, a4, b4);
      u += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
      q += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
    }
    return u;
  };
  return bisect(end_value, lo, hi);
}

/// #{k >= 1 : k^2 pi^2 < |c|}  (clamped_clamped, c < 0, r = 1)
inline std::size_t sl_count_dirichlet(double c) {
  std::size_t n = 0;
  while ((n + 1) * (n + 1) * M_PI * M_PI < -c) ++n;
  return n;
}

/// #{k >= 1 : (k - 1/2)^2 pi^2 < |c|}  (clamped_mass_end, alpha = 0, r = 1)
inline std::size_t sl_count_mixed(double c) {
  std::size_t n = 0;
  while ((n + 0.5) * (n + 0.5) * M_PI * M_PI < -c) ++n;
  return n;
}

}  // namespace oracle
