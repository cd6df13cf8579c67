#include <cmath>

#include "doctest.h"

#include "beampencil/config.hpp"
#include "beampencil/problem.hpp"

using namespace beampencil;

TEST_CASE("coefficient evaluation") {
  CHECK(CoefficientField::constant(2.5)(0.3) == 2.5);
  const auto poly = CoefficientField::polynomial({1.0, -2.0, 3.0});
  CHECK(poly(0.5) == doctest::Approx(1.0 - 1.0 + 0.75));
  const auto table = CoefficientField::table({0.0, 0.5, 1.0}, {1.0, 3.0, 2.0});
  CHECK(table(0.25) == doctest::Approx(2.0));
  CHECK(table(0.75) == doctest::Approx(2.5));
  CHECK(table(1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(table(1.5), DomainError);
  CHECK_THROWS_AS(poly(-0.1), DomainError);
  CHECK(table.breakpoints_in(0.1, 0.9) == std::vector<double>{0.5});
  CHECK(table.breakpoints_in(0.5, 0.9).empty());
}

TEST_CASE("table must cover [0,1] and increase") {
  CHECK_THROWS_AS(CoefficientField::table({0.1, 1.0}, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(CoefficientField::table({0.0, 0.6, 0.5, 1.0}, {1, 1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(CoefficientField::table({0.0, 1.0}, {1.0}), ConfigError);
}

TEST_CASE("positivity certificate") {
  const auto p = CoefficientField::polynomial({1.0, -0.9}).certified_positive("p");
  CHECK(p.uniformly_positive());
  CHECK(p.floor() > 0.0);
  CHECK_THROWS_AS(CoefficientField::polynomial({1.0, -2.0}).certified_positive("p"), ConfigError);
  try {
    CoefficientField::polynomial({0.25, -1.0, 1.0}).certified_positive("p");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x=0.5") != std::string::npos);
  }
}

TEST_CASE("reflection and scaling") {
  const auto f = CoefficientField::polynomial({1.0, 2.0, 0.5});
  const auto g = f.reflected();
  for (double x : {0.0, 0.2, 0.7, 1.0}) CHECK(g(x) == doctest::Approx(f(1.0 - x)));
  const auto t = CoefficientField::table({0.0, 0.3, 1.0}, {1.0, 2.0, 4.0});
  CHECK(t.reflected()(0.7) == doctest::Approx(2.0));
  CHECK(f.scaled(3.0)(0.4) == doctest::Approx(3.0 * f(0.4)));
}

TEST_CASE("meshes") {
  const Mesh u = Mesh::uniform(4);
  CHECK(u.n_elements() == 4);
  CHECK(u.width(2) == doctest::Approx(0.25));
  CHECK(u.locate(1.0) == 3);
  CHECK(u.locate(0.5) == 2);
  const Mesh c = Mesh::cosine(16);
  CHECK(c.node(8) == doctest::Approx(0.5));
  CHECK(c.min_width() < c.width(8));
  const Mesh r = c.refined();
  CHECK(r.n_elements() == 32);
  CHECK(r.node(2) == doctest::Approx(c.node(1)));
  CHECK(r.grading() == c.grading());
  CHECK_THROWS_AS(Mesh::from_nodes({0.0, 0.5, 0.4, 1.0}), ConfigError);
  CHECK_THROWS_AS(check_mesh_for(Mesh::uniform(1), BoundaryKind::ClampedClamped), ConfigError);
}

TEST_CASE("config parsing") {
  const ParsedConfig cfg = parse_problem(R"({
    "p": {"poly": [1, 0.5]}, "r": {"table": [[0, 1], [1, 2]]}, "c": -50, "alpha": -1,
    "bc": "clamped_mass_end", "n_elements": 32, "mesh": "cosine", "seed": 7,
    "tolerances": {"value_tol": 1e-8}})");
  CHECK(cfg.spec.bc == BoundaryKind::ClampedMassEnd);
  CHECK(cfg.spec.c == -50.0);
  CHECK(cfg.spec.alpha == -1.0);
  CHECK(cfg.spec.p.uniformly_positive());
  CHECK(cfg.mesh.n_elements() == 32);
  CHECK(cfg.mesh.grading() == "cosine");
  CHECK(cfg.options.seed == 7);
  CHECK(cfg.options.tol.value_tol == 1e-8);
  CHECK(cfg.spec.r(0.5) == doctest::Approx(1.5));

  const ParsedConfig bare = parse_problem(
      R"({"p": 1, "r": 1, "c": 0, "alpha": 0, "bc": "clamped_clamped", "n_elements": 8})");
  CHECK(bare.mesh.grading() == "uniform");
}

TEST_CASE("config errors") {
  const std::string ok_tail = R"("c": 0, "alpha": 0, "bc": "clamped_clamped", "n_elements": 8})";
  CHECK_THROWS_AS(parse_problem(R"({"p": {"const": 0}, "r": 1, )" + ok_tail), ConfigError);
  CHECK_THROWS_AS(parse_problem(R"({"p": 1, "r": {"const": -1}, )" + ok_tail), ConfigError);
  CHECK_THROWS_AS(parse_problem(R"({"p": 1, "r": 1, "bogus": 1, )" + ok_tail), ConfigError);
  CHECK_THROWS_AS(parse_problem(R"({"p": 1, "r": 1, "c": 0, "alpha": 0, "bc": "pinned", "n_elements": 8})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_problem("{not json"), ConfigError);
  CHECK_THROWS_AS(load_problem("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("boundary kind names round-trip") {
  for (BoundaryKind k : {BoundaryKind::ClampedClamped, BoundaryKind::ClampedMassEnd})
    CHECK(boundary_kind_from_string(to_string(k)) == k);
}
