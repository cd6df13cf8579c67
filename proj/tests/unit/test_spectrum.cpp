#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "beampencil/spectrum.hpp"

using namespace beampencil;

namespace {

ProblemSpec unit_spec(double c, double alpha, BoundaryKind bc) {
  return ProblemSpec::make(CoefficientField::constant(1.0), CoefficientField::constant(1.0), c,
                           alpha, bc);
}

double shoot_near(double guess, double c, double alpha, bool mass_end) {
  // shooting loses digits for large |lambda|; the clamped case has a closed form
  auto d = [&](double l) {
    return mass_end ? oracle::pencil_determinant(l, c, alpha, true) : oracle::clamped_characteristic(l, c);
  };
  double lo = guess * (1 - 1e-3), hi = guess * (1 + 1e-3);
  if (lo > hi) std::swap(lo, hi);
  REQUIRE(((d(lo) > 0) != (d(hi) > 0)));
  return oracle::bisect(d, lo, hi);
}

}  // namespace

TEST_CASE("buckling eigenvalues match the characteristic equation") {
  const auto ref = oracle::buckling_eigenvalues(3);
  CHECK(ref[0] == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-12));
  CHECK(ref[1] == doctest::Approx(80.763).epsilon(1e-5));
  const Spectrum s = compute_spectrum(unit_spec(0, 0, BoundaryKind::ClampedClamped), Mesh::uniform(64));
  CHECK(s.negatives.empty());
  REQUIRE(s.converged_positives >= 3);
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(s.positives[k].lambda / ref[k] - 1) < 1e-5);
}

TEST_CASE("reduction reconstructs B") {
  const PencilMatrices m = assemble_pencil(unit_spec(-30, -0.5, BoundaryKind::ClampedMassEnd),
                                           Mesh::cosine(32));
  const ReducedMatrix r = reduce(m);
  CHECK(r.reconstruction_defect <= 1e-10);
  CHECK((r.R - r.R.transpose()).norm() == doctest::Approx(0.0));
}

TEST_CASE("negative eigenvalues match shooting") {
  for (bool mass_end : {false, true}) {
    const double c = -50, alpha = mass_end ? -1.0 : 0.0;
    const BoundaryKind bc = mass_end ? BoundaryKind::ClampedMassEnd : BoundaryKind::ClampedClamped;
    const Spectrum s = compute_spectrum(unit_spec(c, alpha, bc), Mesh::cosine(64));
    REQUIRE(s.converged_negatives >= 2);
    for (int n = 1; n <= 2; ++n) {
      const double lam = s.at(-n).lambda;
      CHECK(lam < 0);
      CHECK(std::abs(lam / shoot_near(lam, c, alpha, mass_end) - 1) < 1e-5);
    }
    // ordering outwards from zero
    for (std::size_t k = 1; k < s.negatives.size(); ++k)
      CHECK(s.negatives[k].lambda < s.negatives[k - 1].lambda);
  }
}

TEST_CASE("first positive mass-end eigenvalue matches shooting") {
  const Spectrum s = compute_spectrum(unit_spec(5, 1, BoundaryKind::ClampedMassEnd), Mesh::uniform(64));
  const double lam = s.at(1).lambda;
  CHECK(std::abs(lam / shoot_near(lam, 5, 1, true) - 1) < 1e-7);
}

TEST_CASE("inertia index on the buckling pencil") {
  const PencilMatrices m = assemble_pencil(unit_spec(0, 0, BoundaryKind::ClampedClamped), Mesh::uniform(64));
  CHECK(inertia_index(m, 30.0).index == 0);
  CHECK(inertia_index(m, 50.0).index == 1);
  CHECK(inertia_index(m, 100.0).index == 2);
  CHECK(inertia_index(m, -1000.0).index == 0);
  const Spectrum s = pencil_spectrum(m);
  const InertiaResult at = inertia_index(m, s.positives[0].lambda);
  CHECK(at.near_singular);
}

TEST_CASE("inertia does not depend on the positive scaling") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd M(12, 12);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) M(i, j) = normal(rng);
    M = M + M.transpose();
    Eigen::VectorXd s1 = Eigen::VectorXd::Ones(12), s2(12);
    for (int i = 0; i < 12; ++i) s2[i] = scale(rng);
    CHECK(symmetric_inertia(M, s1, 1e-12).index == symmetric_inertia(M, s2, 1e-12).index);
  }
}

TEST_CASE("first buckling mode is 1 - cos 2 pi x") {
  const auto spec = unit_spec(0, 0, BoundaryKind::ClampedClamped);
  const Spectrum s = compute_spectrum(spec, Mesh::uniform(64));
  const EigenfunctionSample f = reconstruct_eigenfunction(s, 1, spec, 2001);
  CHECK(f.ddy.front() > 0);
  const double scale = f.max_abs_y();
  for (std::size_t i = 0; i < f.xs.size(); i += 50) {
    const double x = f.xs[i];
    CHECK(f.y[i] / scale == doctest::Approx((1 - std::cos(2 * M_PI * x)) / 2).epsilon(1e-5));
  }
  const Eigen::VectorXd& v = s.at(1).vector;
  const PencilMatrices m = assemble_pencil(spec, Mesh::uniform(64));
  CHECK(v.dot(m.A * v) == doctest::Approx(1.0));
}

TEST_CASE("mass-end eigenfunctions satisfy the natural condition") {
  const auto spec = unit_spec(-200, -1, BoundaryKind::ClampedMassEnd);
  const Spectrum s = compute_spectrum(spec, Mesh::cosine(96));
  for (int n = 1; n <= 3; ++n) {
    const EigenfunctionSample f = reconstruct_eigenfunction(s, -n, spec, 2001);
    REQUIRE(f.natural_defect.has_value());
    CHECK(*f.natural_defect < 1e-6);
    CHECK(f.strong_residual < 1e-2);
  }
}

TEST_CASE("unconverged entries are refused") {
  const auto spec = unit_spec(0, 0, BoundaryKind::ClampedClamped);
  const Spectrum s = compute_spectrum(spec, Mesh::uniform(8));
  const int top = static_cast<int>(s.positives.size());
  REQUIRE_FALSE(s.at(top).converged);
  CHECK_THROWS_AS(reconstruct_eigenfunction(s, top, spec, 101), NumericalError);
  CHECK_THROWS(s.at(0));
  CHECK_FALSE(s.has(-1));
}

TEST_CASE("clamped spectrum is invariant under x -> 1 - x") {
  const auto p = CoefficientField::polynomial({1.0, 0.8, -0.4});
  const auto r = CoefficientField::polynomial({1.0, 0.0, 1.0});
  const auto a = ProblemSpec::make(p, r, -60, 0, BoundaryKind::ClampedClamped);
  const auto b = ProblemSpec::make(p.reflected(), r.reflected(), -60, 0, BoundaryKind::ClampedClamped);
  const Spectrum sa = pencil_spectrum(assemble_pencil(a, Mesh::uniform(48)));
  const Spectrum sb = pencil_spectrum(assemble_pencil(b, Mesh::uniform(48)));
  REQUIRE(sa.negatives.size() == sb.negatives.size());
  for (std::size_t k = 0; k < sa.negatives.size(); ++k)
    CHECK(sa.negatives[k].lambda == doctest::Approx(sb.negatives[k].lambda).epsilon(1e-9));
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(sa.positives[k].lambda == doctest::Approx(sb.positives[k].lambda).epsilon(1e-9));
}
