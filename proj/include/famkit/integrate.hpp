#pragma once

#include "famkit/boolalg.hpp"
#include "famkit/box.hpp"
#include "famkit/darboux.hpp"
#include "famkit/fam.hpp"
#include "famkit/range_oracle.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace famkit {

enum class Status { integrable, not_integrable, undecided };

std::string to_string(Status status);

// ---- finite backend, exact --------------------------------------------------

/// Σ sup(f[b])·Ξ(b) over the cells of P.
Rational supsum(const ExactFn& f, const Partition& p, const Fam& fam);
/// Σ inf(f[b])·Ξ(b) over the cells of P.
Rational infsum(const ExactFn& f, const Partition& p, const Fam& fam);

/// Lower and upper integrals. The atom partition refines every partition, so
/// its sums are the extreme ones.
struct ExactIntegral {
  Rational lower;
  Rational upper;
  bool integrable = false;
  std::optional<Rational> value;
};

ExactIntegral integrate(const ExactFn& f, const Fam& fam);
/// ∫ f·χ_E.
ExactIntegral integrate_over(const ExactFn& f, const SetElem& e, const Fam& fam);

/// Ξ*(E) = Ξ(ceil E).
Rational outer_measure(const SetElem& e, const Fam& fam);
/// Ξ_*(E) = Ξ(floor E).
Rational inner_measure(const SetElem& e, const Fam& fam);

struct ExactJordan {
  bool jordan = false;
  Rational inner;
  Rational outer;
  /// Sandwich A ⊆ E ⊆ B with A, B in the algebra and Ξ(B∖A) = outer − inner.
  SetElem a;
  SetElem b;
};

ExactJordan is_jordan(const SetElem& e, const Fam& fam);

/// Ξ̂ on the algebra of Jordan sets: positive atoms stay atoms, null atoms
/// split into null singletons.
Fam jordan_completion(const Fam& fam);

struct ExactSimple {
  ExactIntegral integral;
  /// Jordan verdict per level set {f = c}, in increasing order of c; the
  /// implicit zero cell is included.
  std::vector<std::pair<Rational, bool>> level_sets_jordan;
};

/// Σ cᵢ χ_{Eᵢ}. Throws InputError when two cells overlap.
ExactSimple integrate_simple(std::span<const std::pair<SetElem, Rational>> cells, const Fam& fam);
ExactFn simple_table(std::span<const std::pair<SetElem, Rational>> cells, std::size_t n);

/// sup f[a] − inf f[a] on an atom, the oscillation on its principal ultrafilter.
Rational oscillation(const ExactFn& f, const Fam& fam, std::size_t atom);
/// The ultrafilter limit, present iff the oscillation is zero.
std::optional<Rational> ultrafilter_integrate(const ExactFn& f, const Fam& fam, std::size_t atom);

struct PushforwardCheck {
  /// ∫_Y f dΞ_h.
  ExactIntegral lhs;
  /// ∫_X f∘h dΞ.
  ExactIntegral rhs;
  bool equal = false;
  bool injective = false;
  /// Set for injective h: f is Ξ_h-integrable iff f∘h is Ξ-integrable.
  std::optional<bool> same_integrability;
};

PushforwardCheck pushforward_integral_check(const ExactFn& f_on_y, std::span<const std::size_t> map,
                                            const GroundSet& target, const Fam& fam);

struct ConvergenceRow {
  Rational eps;
  /// Ξ*({x : |fₙ(x) − f(x)| ≥ ε}) for each n.
  std::vector<Rational> outer;
  /// First n from which every entry is 0.
  std::optional<std::size_t> settled_at;
  bool converges = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool converges = false;
};

/// Outer measures over a finite algebra take finitely many values, so a row
/// tends to 0 iff it is eventually 0; a row converges when it is 0 at the
/// sampled horizon.
ConvergenceReport xi_star_converges(std::span<const ExactFn> seq, const ExactFn& f, const Fam& fam,
                                    std::span<const Rational> eps_grid);

// ---- box backend, tolerance driven ------------------------------------------

enum class Strategy {
  /// Bisect the widest axis of the cell with the largest (sup − inf)·volume.
  adaptive,
  /// Whole dyadic grid, one level at a time.
  uniform,
};

struct BoxOptions {
  double eps = 1e-6;
  /// Maximum number of cells held by the partition.
  std::size_t budget = std::size_t{1} << 20;
  Strategy strategy = Strategy::adaptive;
  Exec exec = Exec::parallel;
};

struct TraceStep {
  std::size_t cells = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct IntegralReport {
  /// Certified lower ≤ lower integral ≤ upper integral ≤ upper.
  double lower = 0.0;
  double upper = 0.0;
  Status status = Status::undecided;
  std::optional<double> value;
  /// (lower + upper) / 2, reported whatever the status.
  double estimate = 0.0;
  /// Certified lower bound on upper integral − lower integral.
  double gap_floor = 0.0;
  std::size_t cells = 0;
  std::vector<TraceStep> trace;
};

/// Integral of f over the half-open domain with the volume fam.
IntegralReport integrate(const RangeOracle& f, const Box& domain, const BoxOptions& opts = {});
IntegralReport integrate_over(OraclePtr f, SetPtr e, const Box& domain, const BoxOptions& opts = {});

struct JordanOptions {
  double eps = 1e-4;
  std::size_t budget = std::size_t{1} << 20;
  /// Keep the inside and boundary cells so a sandwich witness can be returned.
  bool keep_witness = false;
};

struct JordanReport {
  Status status = Status::undecided;
  /// Volumes of the cells by placement.
  double inside = 0.0;
  double boundary = 0.0;
  double mixed = 0.0;
  /// Brackets: inner ∈ [inside, inside + boundary], outer ∈ [inside + mixed, inside + boundary + mixed].
  std::pair<double, double> inner;
  std::pair<double, double> outer;
  /// Midpoint of the inner bracket; the Jordan measure when status is integrable.
  double measure = 0.0;
  std::size_t cells = 0;
  /// A = inside cells, B = A plus boundary cells, when requested and Jordan.
  std::optional<std::pair<BoxElem, BoxElem>> witness;
};

/// Jordan measurability of E within the domain. Status integrable means
/// Jordan, not_integrable means certified non-Jordan.
JordanReport is_jordan(const SetOracle& e, const Box& domain, const JordanOptions& opts = {});

struct BoxSimple {
  IntegralReport report;
  /// Jordan reports for each level set, including the implicit zero level.
  std::vector<std::pair<double, JordanReport>> level_sets;
};

/// Σ cᵢ χ_{Eᵢ} through the Jordan measures of its level sets.
BoxSimple integrate_simple(std::span<const SimpleFunctionOracle::Cell> cells, const Box& domain,
                           const JordanOptions& opts = {});

}  // namespace famkit
