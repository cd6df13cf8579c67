#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

#include "beampencil/oscillation.hpp"

using namespace beampencil;

namespace {

HermiteFunction interpolate(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, std::size_t n) {
  const Mesh mesh = Mesh::uniform(n);
  Eigen::VectorXd g(static_cast<Eigen::Index>(2 * mesh.n_nodes()));
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    g[static_cast<Eigen::Index>(2 * i)] = f(mesh.node(i));
    g[static_cast<Eigen::Index>(2 * i + 1)] = df(mesh.node(i));
  }
  return HermiteFunction(mesh, g);
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

ProblemSpec unit_spec(double alpha, BoundaryKind bc) {
  return ProblemSpec::make(CoefficientField::constant(1.0), CoefficientField::constant(1.0), 0.0,
                           alpha, bc);
}

}  // namespace

TEST_CASE("sign-change counting") {
  CHECK(count_sign_changes({1, 2, 3}, 0).count == 0);
  CHECK(count_sign_changes({1, -1, 1}, 0).count == 2);
  CHECK(count_sign_changes({1, 1e-12, -1e-12, 1}, 1e-9).count == 0);
  std::vector<double> s;
  for (int i = 0; i <= 2000; ++i) s.push_back(std::sin(3 * M_PI * i / 2000.0));
  CHECK(count_sign_changes(s, 1e-9).count == 2);
  const SignChangeCount d = count_sign_changes({0, 1e-12, -1e-12}, 1e-9);
  CHECK(d.count == 0);
  CHECK(d.degenerate);
  CHECK_THROWS_AS(count_sign_changes({1.0}, 0), ConfigError);
}

TEST_CASE("zeros of smooth test functions") {
  const auto bump = interpolate([](double x) { return x * x * (1 - x) * (1 - x); },
                                [](double x) { return 2 * x * (1 - x) * (1 - 2 * x); }, 32);
  CHECK(locate_zeros(bump, 2001, 1e-9, 1e-5).zeros.empty());

  const auto mode = interpolate([](double x) { return 1 - std::cos(2 * M_PI * x); },
                                [](double x) { return 2 * M_PI * std::sin(2 * M_PI * x); }, 64);
  const ZeroReport zm = locate_zeros(mode, 2001, 1e-9, 1e-5);
  CHECK(zm.zeros.empty());
  CHECK(zm.sign_changes == 0);

  const auto wave = interpolate([](double x) { return std::sin(3 * M_PI * x); },
                                [](double x) { return 3 * M_PI * std::cos(3 * M_PI * x); }, 64);
  const ZeroReport zw = locate_zeros(wave, 2001, 1e-9, 1e-5);
  REQUIRE(zw.zeros.size() == 2);
  CHECK(zw.zeros[0].x == doctest::Approx(1.0 / 3).epsilon(1e-7));
  CHECK(zw.zeros[1].x == doctest::Approx(2.0 / 3).epsilon(1e-7));
  CHECK(zw.all_simple());
  CHECK(zw.sign_changes == zw.simple_count());
  CHECK(zw.value_tol == 1e-9);
  CHECK(zw.deriv_tol == 1e-5);
}

TEST_CASE("touching and clustered zeros are not simple") {
  const auto touch = interpolate([](double x) { return (x - 0.5) * (x - 0.5); },
                                 [](double x) { return 2 * (x - 0.5); }, 16);
  const ZeroReport zt = locate_zeros(touch, 2001, 1e-9, 1e-5);
  REQUIRE(zt.zeros.size() == 1);
  CHECK_FALSE(zt.zeros[0].simple);
  CHECK(zt.zeros[0].x == doctest::Approx(0.5));

  const auto close = interpolate([](double x) { return (x - 0.5002) * (x - 0.5009); },
                                 [](double x) { return 2 * x - 1.0011; }, 16);
  const ZeroReport zc = locate_zeros(close, 2001, 1e-9, 1e-5);
  REQUIRE(zc.zeros.size() == 1);
  CHECK_FALSE(zc.zeros[0].simple);
  CHECK_FALSE(zc.warnings.empty());
}

TEST_CASE("y'''' = y from the forward cone vertex") {
  const auto one = CoefficientField::constant(1.0).certified_positive("p");
  const DisconjugacyResult d =
      disconjugacy_check(one, CoefficientField::constant(1.0), ConeState{0.0, {0, 0, 0, 1}});
  CHECK(d.pass);
  const double s1 = std::sinh(1.0), n1 = std::sin(1.0), c1 = std::cosh(1.0), k1 = std::cos(1.0);
  CHECK(std::abs(d.end[0] - (s1 - n1) / 2) < 1e-8);
  CHECK(std::abs(d.end[1] - (c1 - k1) / 2) < 1e-8);
  CHECK(std::abs(d.end[2] - (s1 + n1) / 2) < 1e-8);
  CHECK(std::abs(d.end[3] - (c1 + k1) / 2) < 1e-8);
  CHECK(d.steps == 10000);
}

TEST_CASE("y'''' = y backward from x = 1") {
  const auto one = CoefficientField::constant(1.0).certified_positive("p");
  const DisconjugacyResult d = disconjugacy_check(
      one, CoefficientField::constant(1.0), ConeState{1.0, {1, 0, 0, 0}, ConeDirection::Backward});
  CHECK(d.pass);
  const double s1 = std::sinh(1.0), n1 = std::sin(1.0), c1 = std::cosh(1.0), k1 = std::cos(1.0);
  CHECK(std::abs(d.end[0] - (c1 + k1) / 2) < 1e-8);
  CHECK(std::abs(d.end[1] - (n1 - s1) / 2) < 1e-8);
  CHECK(std::abs(d.end[2] - (c1 - k1) / 2) < 1e-8);
  CHECK(std::abs(d.end[3] + (s1 + n1) / 2) < 1e-8);
}

TEST_CASE("cone states are validated") {
  const auto one = CoefficientField::constant(1.0).certified_positive("p");
  const auto r = CoefficientField::constant(1.0);
  CHECK_THROWS_AS(disconjugacy_check(one, r, ConeState{0.0, {0, 0, 0, 0}}), ConfigError);
  CHECK_THROWS_AS(disconjugacy_check(one, r, ConeState{0.0, {1, -1, 0, 0}}), ConfigError);
  CHECK_THROWS_AS(disconjugacy_check(one, r, ConeState{1.0, {1, 0, 0, 0}}), DomainError);
  CHECK_THROWS_AS(
      disconjugacy_check(one, r, ConeState{0.0, {1, 0, 0, 0}, ConeDirection::Backward}), DomainError);
}

TEST_CASE("forward and backward runs agree under x -> 1 - x") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = CoefficientField::polynomial({1.0 + u(rng), u(rng) - 0.5, u(rng)}).certified_positive("p");
    const auto r = CoefficientField::polynomial({0.5 + u(rng), u(rng), -0.3 * u(rng)});
    const std::array<double, 4> q = {u(rng), u(rng), u(rng), u(rng)};
    const DisconjugacyResult f = disconjugacy_check(p, r, ConeState{0.0, q});
    const DisconjugacyResult b = disconjugacy_check(
        p.reflected(), r.reflected(), ConeState{1.0, {q[0], -q[1], q[2], -q[3]}, ConeDirection::Backward});
    CHECK(f.pass);
    CHECK(b.pass);
    const std::array<double, 4> relabeled = {b.end[0], -b.end[1], b.end[2], -b.end[3]};
    for (int j = 0; j < 4; ++j) CHECK(relabeled[j] == doctest::Approx(f.end[j]).epsilon(1e-9));
  }
}

TEST_CASE("random cone states stay in the cone") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int pair = 0; pair < 3; ++pair) {
    const auto p = CoefficientField::polynomial({0.5 + u(rng), u(rng)}).certified_positive("p");
    const auto r = CoefficientField::polynomial({0.1 + u(rng), u(rng)});
    for (int k = 0; k < 10; ++k) {
      std::array<double, 4> q{};
      for (double& v : q) v = u(rng) < 0.3 ? 0.0 : u(rng);
      if (q == std::array<double, 4>{}) q[0] = 1.0;
      const double a = 0.9 * u(rng);
      CHECK(disconjugacy_check(p, r, ConeState{a, q}).pass);
      CHECK(disconjugacy_check(p, r, ConeState{1.0 - a, {q[0], -q[1], q[2], -q[3]}, ConeDirection::Backward}).pass);
    }
  }
}

TEST_CASE("sign changes do not increase through the model BVP") {
  const Mesh mesh = Mesh::uniform(64);
  const SignChangeTrial flat = signchange_noninc_check(unit_spec(0, BoundaryKind::ClampedClamped), {1.0}, mesh);
  CHECK(flat.k_in == 0);
  CHECK(flat.k_out == 0);
  CHECK(flat.pass);

  // P4(2x - 1) = (35 s^4 - 30 s^2 + 3) / 8
  const std::vector<double> s = {-1.0, 2.0};
  const std::vector<double> s2 = poly_mul(s, s), s4 = poly_mul(s2, s2);
  std::vector<double> legendre(5, 0.0);
  for (std::size_t k = 0; k < 5; ++k) legendre[k] += 35.0 / 8 * s4[k];
  for (std::size_t k = 0; k < 3; ++k) legendre[k] -= 30.0 / 8 * s2[k];
  legendre[0] += 3.0 / 8;
  const SignChangeTrial leg = signchange_noninc_check(unit_spec(0, BoundaryKind::ClampedClamped), legendre, mesh);
  CHECK(leg.k_in == 4);
  CHECK(leg.k_out <= 4);
  CHECK(leg.pass);

  const SignChangeTrial me = signchange_noninc_check(unit_spec(1, BoundaryKind::ClampedMassEnd), {-0.3, 1.0}, mesh);
  CHECK(me.k_in == 1);
  CHECK(me.k_out <= 1);
  CHECK(me.pass);

  CHECK_THROWS_AS(signchange_noninc_check(unit_spec(-1, BoundaryKind::ClampedMassEnd), {1.0}, mesh), ConfigError);
  CHECK_THROWS_AS(signchange_noninc_check(unit_spec(0, BoundaryKind::ClampedClamped),
                                          std::vector<double>(14, 1.0), mesh),
                  ConfigError);
}

TEST_CASE("negative-branch eigenfunctions have n-1 simple zeros") {
  const auto spec = ProblemSpec::make(CoefficientField::constant(1.0), CoefficientField::constant(1.0),
                                      -200, 0, BoundaryKind::ClampedClamped);
  const Spectrum sp = compute_spectrum(spec, Mesh::cosine(64));
  for (int n = 1; n <= 4; ++n) {
    const EigenfunctionSample f = reconstruct_eigenfunction(sp, -n, spec, 2001);
    const ZeroReport z = locate_zeros(f, 1e-9, 1e-5);
    CHECK(z.zeros.size() == static_cast<std::size_t>(n - 1));
    CHECK(z.all_simple());
    CHECK(locate_zeros(f, 5e-10, 1e-5).zeros.size() == z.zeros.size());
  }
}
