#pragma once

#include "famkit/fam.hpp"
#include "famkit/integrate.hpp"
#include "famkit/range_oracle.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace famkit {

/// Clopen subset of Cantor space as a finite union of cylinders [s], kept
/// prefix-free with sibling pairs [s0] ∪ [s1] merged into [s].
class CantorClopen {
 public:
  CantorClopen() = default;
  /// Any strings over {0,1}; overlapping cylinders are absorbed.
  explicit CantorClopen(std::vector<std::string> cylinders);
  static CantorClopen whole() { return CantorClopen({""}); }
  /// Union of the depth-d cylinders with the given indices; index k names the
  /// string of k written in d binary digits, most significant first.
  static CantorClopen from_level(unsigned depth, std::vector<std::uint64_t> indices);

  const std::vector<std::string>& cylinders() const { return cylinders_; }
  bool empty() const { return cylinders_.empty(); }
  friend bool operator==(const CantorClopen&, const CantorClopen&) = default;

 private:
  std::vector<std::string> cylinders_;
};

CantorClopen clopen_union(const CantorClopen& a, const CantorClopen& b);

/// Λ₋([s]) = 2^{−|s|}.
Rational cylinder_measure(std::string_view s);
Rational clopen_measure(const CantorClopen& c);

/// [Σ s(i)/2^{i+1}, that + 2^{−|s|}], the image of [s] under ι₂.
std::pair<Rational, Rational> iota2_image(std::string_view s);
/// The same image as a box: half-open, closed at 1 for the all-ones strings.
Box iota2_box(std::string_view s);

struct CantorOptions {
  double eps = 1e-4;
  unsigned max_depth = 20;
  Exec exec = Exec::parallel;
};

/// Λ₋-integral of g∘ι₂ by Darboux sums on uniform-depth cylinder partitions.
IntegralReport cantor_integrate(const RangeOracle& g, const CantorOptions& opts = {});

struct OscillationCover {
  unsigned depth = 0;
  CantorClopen cover;
  Rational measure;
  /// Λ₋ of the cover cells whose hereditary oscillation reaches the
  /// threshold: a certified part of the oscillation set.
  Rational certified;
};

/// Depth-d cylinders whose g-range has width ≥ threshold. Only children of
/// the previous level's cover are examined, so the measure never grows with depth.
OscillationCover oscillation_cover(const RangeOracle& g, double threshold, unsigned depth);

struct ProfileRow {
  double threshold = 0.0;
  unsigned depth = 0;
  Rational measure;
  Rational certified;
};

struct LebesgueVitaliReport {
  Status verdict = Status::undecided;
  std::vector<ProfileRow> profile;
  /// The Darboux run on the same budget, for cross-checking.
  IntegralReport integral;
};

/// Thresholds 2^-1, ..., 2^-6. Integrable when every threshold's cover drops
/// below ε within the depth budget; not_integrable when some threshold has a
/// certified oscillation set of positive measure.
LebesgueVitaliReport lebesgue_vitali_check(const RangeOracle& g, double eps, unsigned depth_budget);

/// Finite convergent-sequence space {x₀, ..., x_{N−1}, tail, 1}: the points
/// x_n are null singletons, {tail, 1} carries mass 1, and the point "1"
/// stands for the limit. `id` sends x_n to 1 − 2^{−(n+1)}, tail to
/// 1 − 2^{−(N+1)} and the limit to 1.
struct SequenceSpace {
  Fam fam;
  ExactFn id;
  /// {x : id(x) < 1}, the sub-level set whose bracket stays [0, 1].
  SetElem below_one;
};

SequenceSpace convergent_sequence_space(std::size_t n);

}  // namespace famkit
