#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace famkit {

/// Hard storage width of a SetElem, in ground-set elements.
inline constexpr std::size_t kGroundCapacity = 256;
/// Default cap on the ground-set size; raise it per GroundSet up to kGroundCapacity.
inline constexpr std::size_t kDefaultGroundCap = 64;
/// Guard against generator blowup when splitting atoms.
inline constexpr std::size_t kAtomCap = std::size_t{1} << 16;

/// Membership mask over a ground set. Bits at positions >= n are always zero.
class SetElem {
 public:
  static constexpr std::size_t kWords = kGroundCapacity / 64;

  SetElem() = default;
  SetElem(std::initializer_list<std::size_t> indices);
  static SetElem from_indices(std::span<const std::size_t> indices);
  /// Elements 0..n-1.
  static SetElem full(std::size_t n);

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const;
  bool empty() const;
  /// Index one past the highest member (0 for the empty set).
  std::size_t extent() const;
  /// Smallest member; undefined on the empty set.
  std::size_t first() const;
  std::vector<std::size_t> indices() const;

  bool subset_of(const SetElem& other) const;
  bool intersects(const SetElem& other) const;
  SetElem complement(std::size_t n) const;
  SetElem minus(const SetElem& other) const;

  SetElem& operator|=(const SetElem& o);
  SetElem& operator&=(const SetElem& o);
  friend SetElem operator|(SetElem a, const SetElem& b) { return a |= b; }
  friend SetElem operator&(SetElem a, const SetElem& b) { return a &= b; }

  friend bool operator==(const SetElem&, const SetElem&) = default;
  /// Lexicographic order on the membership vector read from index 0, where a
  /// member sorts before a non-member. On disjoint sets this orders by least
  /// element, so {0,1} < {2,3}.
  friend std::strong_ordering operator<=>(const SetElem& a, const SetElem& b);

  std::size_t hash() const;

 private:
  std::array<std::uint64_t, kWords> words_{};
};

struct SetElemHash {
  std::size_t operator()(const SetElem& s) const { return s.hash(); }
};

class GroundSet {
 public:
  /// Ground set {0, ..., n-1} labelled by decimal strings.
  explicit GroundSet(std::size_t n, std::size_t cap = kDefaultGroundCap);
  explicit GroundSet(std::vector<std::string> labels, std::size_t cap = kDefaultGroundCap);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::optional<std::size_t> index_of(const std::string& label) const;

  SetElem full() const { return SetElem::full(size()); }
  /// True when every member of s is below size().
  bool owns(const SetElem& s) const { return s.extent() <= size(); }
  /// Throws InputError unless owns(s).
  void require(const SetElem& s, const char* what) const;

  friend bool operator==(const GroundSet& a, const GroundSet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
};

/// A finite field of sets, represented by its atom partition.
class Algebra {
 public:
  /// Validates that atoms are nonempty, pairwise disjoint and cover the ground set.
  Algebra(GroundSet ground, std::vector<SetElem> atoms);

  static Algebra trivial(GroundSet ground);
  static Algebra power_set(GroundSet ground);

  const GroundSet& ground() const { return ground_; }
  const std::vector<SetElem>& atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }

  /// Index of the atom containing point x.
  std::size_t atom_of(std::size_t x) const { return atom_of_point_.at(x); }

  /// Indices of the atoms contained in b.
  std::vector<std::size_t> atoms_inside(const SetElem& b) const;
  /// Indices of the atoms meeting b.
  std::vector<std::size_t> atoms_meeting(const SetElem& b) const;

  /// Union of the atoms selected by the low bits of mask (atom_count() <= 63).
  SetElem element(std::uint64_t atom_mask) const;
  SetElem element(std::span<const std::size_t> atom_indices) const;
  /// Atom-mask representation of an element of the algebra (atom_count() <= 64).
  std::uint64_t mask_of(const SetElem& b) const;

  /// Number of elements, 2^atom_count(), when it fits in 64 bits.
  std::uint64_t element_count() const;

  friend bool operator==(const Algebra& a, const Algebra& b) {
    return a.ground_ == b.ground_ && a.atoms_ == b.atoms_;
  }

 private:
  GroundSet ground_;
  std::vector<SetElem> atoms_;
  std::vector<std::size_t> atom_of_point_;
};

/// Smallest field of sets containing every generator, by iterative atom splitting.
Algebra generate_algebra(const GroundSet& ground, std::span<const SetElem> generators);
/// Algebra generated by the atoms of `base` together with extra generators.
Algebra refine_algebra(const Algebra& base, std::span<const SetElem> generators);
/// Smallest algebra containing both (the join of two fields of sets).
Algebra join_algebras(const Algebra& a, const Algebra& b);

inline const std::vector<SetElem>& atoms(const Algebra& algebra) { return algebra.atoms(); }
bool contains(const Algebra& algebra, const SetElem& b);
/// Union of the atoms contained in b: the largest algebra element below b.
SetElem floor_in(const Algebra& algebra, const SetElem& b);
/// Union of the atoms meeting b: the smallest algebra element above b.
SetElem ceil_in(const Algebra& algebra, const SetElem& b);

/// Finite partition of the ground set into nonempty algebra elements.
class Partition {
 public:
  /// Drops empty cells, validates disjointness, coverage and membership, sorts cells.
  Partition(const Algebra& algebra, std::vector<SetElem> cells);

  static Partition unit(const Algebra& algebra);
  static Partition atoms_of(const Algebra& algebra);

  const std::vector<SetElem>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  std::size_t ground_size() const { return ground_size_; }

  /// True when every cell belongs to `algebra` (and the ground sizes match).
  bool fits(const Algebra& algebra) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition() = default;
  friend Partition meet_partitions(const Partition& p, const Partition& q);

  std::size_t ground_size_ = 0;
  std::vector<SetElem> cells_;
};

/// Common refinement {a ∩ b ≠ ∅ : a ∈ P, b ∈ Q}.
Partition meet_partitions(const Partition& p, const Partition& q);
/// True iff every cell of `coarse` is a union of cells of `fine`.
bool is_refinement(const Partition& fine, const Partition& coarse);

}  // namespace famkit
