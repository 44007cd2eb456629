#pragma once

#include "famkit/fam.hpp"

#include <map>
#include <optional>
#include <span>

namespace famkit {

/// Probability measure μ on the subsets of a finite u.
struct FiniteApprox {
  SetElem u;
  std::map<std::size_t, Rational> mu;
  bool uniform = false;

  Rational mass(const SetElem& b) const;
};

enum class AvoidPolicy {
  /// Avoided points are kept out of uniform cells; a cell too small for its
  /// quota falls back to one weighted point, preferring non-avoided points.
  prefer,
  /// Every selected point must avoid; a positive cell with nothing left
  /// raises DomainError naming the cell.
  require,
};

/// Rounding construction with c = ⌈δ/ε⌉ points of mass 1/c distributed by
/// cumulative floors/ceilings of c·Ξ(b)/δ. A cell with fewer than k_m
/// non-avoided points instead gets one point carrying k_m/c.
FiniteApprox approx_uniform(const Fam& fam, const Partition& p, const Rational& epsilon,
                            const SetElem& avoid = {}, AvoidPolicy policy = AvoidPolicy::prefer);

/// As approx_uniform, but with at most min(⌈δ/ε⌉, |P|) points: when
/// |P| <= ⌈δ/ε⌉, one point per positive cell with μ = Ξ(b)/δ.
FiniteApprox approx_uniform_small(const Fam& fam, const Partition& p, const Rational& epsilon);

/// Some nonempty u with |δ·|u∩b|/|u| − Ξ(b)| < ε for all b ∈ P. Built from the
/// uniform support when one exists (exact equality), otherwise found by an
/// exhaustive search over per-cell counts for every |u| <= |X|.
std::optional<SetElem> uap_witness(const Fam& fam, const Partition& p, const Rational& epsilon);

/// Approximation that additionally keeps δ·Σ f(x)μ({x}) within ε of the
/// lower and upper integrals of every f. P is refined by the level
/// structure of each f on the atoms before delegating to approx_uniform_small.
FiniteApprox approx_with_integrals(const Fam& fam, const Partition& p, const Rational& epsilon,
                                   std::span<const ExactFn> fns);

}  // namespace famkit
