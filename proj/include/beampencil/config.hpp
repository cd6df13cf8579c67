#pragma once

#include <cstdint>
#include <string>

#include "beampencil/problem.hpp"
#include "beampencil/tolerances.hpp"

namespace beampencil {

struct RunOptions {
  std::size_t samples = 2001;  // eigenfunction sampling density
  std::uint64_t seed = 20240611;
  Tolerances tol;
};

struct ParsedConfig {
  ProblemSpec spec;
  Mesh mesh = Mesh::uniform(2);
  RunOptions options;
};

/// Parses the JSON configuration document:
///
///   { "p": {"const": 1}, "r": {"poly": [1, 0.5]}, "c": -50, "alpha": 0,
///     "bc": "clamped_clamped", "n_elements": 64,
///     "samples": 2001, "mesh": "uniform" | "cosine", "nodes": [...],
///     "seed": 7, "tolerances": { "value_tol": 1e-9, ... } }
///
/// Coefficients are `{"const": v}`, `{"poly": [a0, a1, ...]}` or
/// `{"table": [[x, v], ...]}`. Throws ConfigError on any defect.
ParsedConfig parse_problem(const std::string& text);

ParsedConfig load_problem(const std::string& path);

CoefficientField parse_coefficient(const std::string& json_text, const std::string& name);

}  // namespace beampencil
