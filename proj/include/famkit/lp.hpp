#pragma once

#include "famkit/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace famkit {

/// Linear feasibility problem over nonnegative rational variables:
///   equalities  a·w = b
///   ranges      l <= a·w <= u
///   bounds      w >= 0
struct FeasibilitySystem {
  struct Equality {
    std::vector<Rational> coeffs;
    Rational rhs;
    std::string label;
  };
  struct Range {
    std::vector<Rational> coeffs;
    Rational lower;
    Rational upper;
    std::string label;
  };

  explicit FeasibilitySystem(std::size_t variable_count = 0) : variables(variable_count) {}

  void add_equality(std::vector<Rational> coeffs, Rational rhs, std::string label = {});
  void add_range(std::vector<Rational> coeffs, Rational lower, Rational upper, std::string label = {});

  std::size_t variables = 0;
  std::vector<Equality> equalities;
  std::vector<Range> ranges;
};

/// Outcome of a phase-1 solve. A feasible outcome carries the first basic
/// feasible point reached under Bland's rule. An infeasible outcome carries a
/// Farkas certificate: multipliers y (equalities, free sign), lambda >= 0 on
/// the lower side of each range and mu >= 0 on the upper side, such that the
/// combined row g = Σ y·a + Σ (lambda − mu)·a is <= 0 componentwise while
/// beta = Σ y·b + Σ lambda·l − Σ mu·u is > 0.
struct FeasibilityOutcome {
  bool feasible = false;
  std::vector<Rational> point;
  std::vector<Rational> equality_multipliers;
  std::vector<Rational> lower_multipliers;
  std::vector<Rational> upper_multipliers;
};

FeasibilityOutcome solve_feasibility(const FeasibilitySystem& system);

enum class OptimumStatus { optimal, infeasible, unbounded };

struct OptimumOutcome {
  OptimumStatus status = OptimumStatus::infeasible;
  Rational value;
  std::vector<Rational> point;
};

/// Exact two-phase simplex with Bland's rule.
OptimumOutcome minimize(const FeasibilitySystem& system, const std::vector<Rational>& objective);
OptimumOutcome maximize(const FeasibilitySystem& system, const std::vector<Rational>& objective);

/// Checks a point against every constraint exactly.
bool satisfies(const FeasibilitySystem& system, const std::vector<Rational>& point);
/// Checks the Farkas conditions of an infeasible outcome exactly.
bool certifies_infeasibility(const FeasibilitySystem& system, const FeasibilityOutcome& outcome);

}  // namespace famkit
