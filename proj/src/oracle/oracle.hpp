#pragma once

#include "famkit/extend.hpp"
#include "famkit/fam.hpp"
#include "famkit/lp.hpp"

namespace famkit::oracle {

/// Feasibility by Fourier–Motzkin elimination, last variable first.
/// At most 12 variables.
bool fm_feasible(const FeasibilitySystem& system);

/// False iff some h: dom f → {−k..k} has Σ h(a)χ_a >= 0 everywhere but
/// Σ h(a)f(a) < 0. At most 5 pairs and k <= 3.
bool scan_separation_condition(const PartialAssignment& assignment, int k);

/// Equal totals and Ξ₀(a) <= Ξ₁(a′) for every a ∈ ℬ₀, a′ ∈ ℬ₁ with a ⊆ a′.
bool scan_order_condition(const Fam& fam0, const Fam& fam1);

struct PartitionIntegral {
  /// sup over all partitions of the lower sum.
  Rational lower;
  /// inf over all partitions of the upper sum.
  Rational upper;
};

/// Lower and upper integrals of f by enumerating every partition of the atom
/// set (at most 8 atoms).
PartitionIntegral exhaustive_integral(const ExactFn& f, const Fam& fam);

}  // namespace famkit::oracle
