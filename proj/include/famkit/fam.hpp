#pragma once

#include "famkit/boolalg.hpp"
#include "famkit/rational.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace famkit {

/// Finitely additive measure on a finite field of sets, stored as one exact
/// nonnegative weight per atom. Additivity holds by construction.
class Fam {
 public:
  Fam(Algebra algebra, std::vector<Rational> weights);
  /// Atoms given with their weights in any order.
  static Fam from_pieces(const GroundSet& ground, std::vector<std::pair<SetElem, Rational>> pieces);

  const Algebra& algebra() const { return algebra_; }
  const GroundSet& ground() const { return algebra_.ground(); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(std::size_t atom) const { return weights_.at(atom); }
  /// Ξ(X).
  const Rational& total() const { return total_; }

  /// Throws DomainError when b is not an element of the algebra.
  Rational eval(const SetElem& b) const;
  /// Sum of the weights of the atoms selected by an atom mask.
  Rational eval_mask(std::uint64_t atom_mask) const;

  friend bool operator==(const Fam& a, const Fam& b) {
    return a.algebra_ == b.algebra_ && a.weights_ == b.weights_;
  }

 private:
  Algebra algebra_;
  std::vector<Rational> weights_;
  Rational total_;
};

inline Rational eval(const Fam& fam, const SetElem& b) { return fam.eval(b); }

/// Exact real function on a finite ground set, one value per point.
using ExactFn = std::vector<Rational>;

/// Uniform measure with support u on the full power set: Ξ(x) = |x ∩ u| / |u|.
Fam uniform_fam(const GroundSet& ground, const SetElem& u);

/// 0/1-valued fam of the filter generated by `generators`, living on the
/// subalgebra ⟨F⟩ whose atoms are the filter core ⋂ generators and the atoms
/// of `algebra` disjoint from it. Generators outside the algebra are first
/// adjoined to it. Throws DomainError when the generators have empty meet.
Fam filter_fam(const Algebra& algebra, std::span<const SetElem> generators);

/// Image measure Ξ_h(A) = Ξ(h⁻¹[A]) on {A ⊆ Y : h⁻¹[A] ∈ ℬ}. `map[x]` is h(x)
/// as an index into `target`.
Fam pushforward(const Fam& fam, std::span<const std::size_t> map, const GroundSet& target);

/// Ξ|_b on ℬ|_b. The result's ground set is b itself, with b's labels in order.
Fam restrict(const Fam& fam, const SetElem& b);

struct FamFlags {
  bool probability = false;
  bool strictly_positive = false;
  /// Literal freeness: every singleton is in the algebra and has measure zero.
  /// On a finite ground set this can only hold when Ξ(X) = 0.
  bool free = false;
  /// Every finite algebra element is null; on a finite ground set, Ξ(X) = 0.
  bool finite_sets_null = false;
  /// Ξ(X) = 0, the trivial measure.
  bool degenerate = false;
};

FamFlags classify(const Fam& fam);

struct SupportWitness {
  /// Least d with every value a multiple ℓ·δ/d and ℓ <= |b|.
  mpz_class d;
  /// Greedy minimal-positive-measure peeling; positive atoms in increasing
  /// weight order, then the null remainder.
  Partition support;
};

/// Throws DomainError when Ξ(X) = 0.
std::optional<SupportWitness> uniformly_supported(const Fam& fam);

/// Uniform approximation property: finite sets null, or uniformly supported.
bool has_uap(const Fam& fam);

}  // namespace famkit
