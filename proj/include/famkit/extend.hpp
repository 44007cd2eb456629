#pragma once

#include "famkit/fam.hpp"
#include "famkit/lp.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace famkit {

/// Partial function f from subsets of the ground set to [0, ∞) with X in its domain.
struct PartialAssignment {
  GroundSet ground;
  std::vector<std::pair<SetElem, Rational>> pairs;

  /// Throws InputError unless the sets are distinct, owned by the ground set,
  /// the values nonnegative and X present.
  void validate() const;
  Rational total() const;
  std::vector<SetElem> domain() const;
};

/// Why an extension problem has no solution. Each kind fills only its fields.
struct Certificate {
  enum class Kind {
    none,
    /// h over the assignment pairs with Σ h(a)χ_a >= 0 pointwise and Σ h(a)f(a) < 0.
    separating_h,
    /// a <= b with Ξ₀(a) > Ξ₁(b); (X, X) for a total mismatch.
    order_pair,
    /// Positive-measure set a disjoint from the meet of `generators` (fam index in `side`).
    filter_meet,
    /// Ξ₀(a) > Ξ₁(b) although a ∧ ⋀J <= b ∧ ⋀J, with J = `generators`.
    filter_order,
    /// Farkas multipliers, one per constraint row (equalities, then ranges as λ−μ).
    farkas_rows,
    /// No ground point of the ultrafilter core meets every target.
    no_point,
  };
  Kind kind = Kind::none;
  std::vector<Rational> h;
  SetElem a;
  SetElem b;
  std::vector<SetElem> generators;
  int side = 0;
  std::string message;
};

struct ExtensionResult {
  bool feasible = false;
  std::optional<Fam> witness;
  Certificate certificate;
};

/// Does some fam on ⟨dom f⟩ extend f? Decided by exact feasibility over the
/// atoms of ⟨dom f⟩; the witness is the first basic feasible point under
/// Bland's rule, the certificate an integer h-vector.
ExtensionResult extend_assignment(const PartialAssignment& assignment);

/// Exact check of a separating h-vector against the assignment.
bool refutes(const PartialAssignment& assignment, std::span<const Rational> h);

/// Least and greatest value at b over all fams on ⟨dom f ∪ {b}⟩ extending f.
/// Returns nullopt when f has no extension.
std::optional<std::pair<Rational, Rational>> extension_bounds(const PartialAssignment& assignment,
                                                              const SetElem& b);

/// Atoms of both fams (and X) as one assignment. Throws DomainError when the
/// fams give a shared atom different values.
PartialAssignment merge_assignment(const Fam& fam0, const Fam& fam1);

struct Compatibility {
  bool compatible = false;
  Certificate certificate;
};

/// Common extension exists iff a <= a′ forces Ξ₀(a) <= Ξ₁(a′). The verdict
/// comes from the merged feasibility problem; an incompatibility is explained
/// by the pair (floor_{ℬ₀}(a′), a′).
Compatibility compatible(const Fam& fam0, const Fam& fam1);

/// Witness fam on ⟨ℬ₀ ∪ ℬ₁⟩ extending both.
ExtensionResult amalgamate(const Fam& fam0, const Fam& fam1);

/// (Ξ(floor_ℬ(b)), Ξ(ceil_ℬ(b))): the range of values b can take in an extension.
std::pair<Rational, Rational> extension_bounds(const Fam& fam, const SetElem& b);

/// Extension to ⟨ℬ ∪ {b}⟩ with value z at b. Mass on the split atoms is
/// pushed onto b in atom order until b reaches z. Throws DomainError when z
/// is outside extension_bounds.
Fam extend_one(const Fam& fam, const SetElem& b, const Rational& z);

/// Extension to ⟨ℬ ∪ {b}⟩ whose range stays inside K: each split atom keeps
/// its whole weight on a ∩ b. Throws DomainError unless ran Ξ ⊆ K and 0 ∈ K.
Fam extend_preserving_range(const Fam& fam, const SetElem& b, std::span<const Rational> k);

/// The unique extension to ⟨ℬ₀ ∪ gens⟩ giving every generator full measure,
/// or the positive set that misses the generators' meet.
ExtensionResult extend_with_filter(const Fam& fam0, std::span<const SetElem> generators);

/// Common extension of two fams giving every generator full measure. Both
/// filter conditions are checked with J = all generators (the strongest case
/// on a finite algebra) before the construction runs.
ExtensionResult three_way_extend(const Fam& fam0, const Fam& fam1, std::span<const SetElem> generators);

/// Closed interval or finite set of admissible values.
struct TargetSet {
  std::optional<std::pair<Rational, Rational>> interval;
  std::vector<Rational> points;

  static TargetSet between(Rational lo, Rational hi);
  static TargetSet one_of(std::vector<Rational> values);
  bool contains(const Rational& v) const;
};

/// Fam on ⟨sets⟩ with Ξ(X) = δ and Ξ(sets[i]) ∈ targets[i]. Finite target
/// sets are handled by solving one interval problem per value combination.
ExtensionResult fam_with_constraints(const GroundSet& ground, std::span<const SetElem> sets,
                                     std::span<const TargetSet> targets, const Rational& delta);

/// Fam on the power set extending fam0 with Σ_x f_i(x)Ξ({x}) ∈ targets[i].
ExtensionResult fam_with_integral_constraints(const Fam& fam0, std::span<const ExactFn> fns,
                                              std::span<const TargetSet> targets);

/// Principal ultrafilter at the first core point z with f_i(z) ∈ targets[i]
/// for all i; it extends the 0/1-valued ultra0 and has limits f_i(z).
ExtensionResult ultrafilter_with_limits(const Fam& ultra0, std::span<const ExactFn> fns,
                                        std::span<const TargetSet> targets);

/// Cap on enumerated algebra elements for certificate scans.
inline constexpr std::size_t kScanAtomCap = 20;

}  // namespace famkit
