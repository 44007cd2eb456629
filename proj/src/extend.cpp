#include "famkit/extend.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace famkit {

namespace {

std::string describe(const GroundSet& g, const SetElem& s) {
  std::string out = "{";
  for (auto x : s.indices()) {
    if (out.size() > 1) out += ",";
    out += g.label(x);
  }
  return out + "}";
}

// One equality per pair, over the atoms of `algebra`.
FeasibilitySystem assignment_system(const PartialAssignment& f, const Algebra& algebra) {
  FeasibilitySystem system(algebra.atom_count());
  for (const auto& [set, value] : f.pairs) {
    std::vector<Rational> row(algebra.atom_count(), Rational(0));
    for (auto i : algebra.atoms_inside(set)) row[i] = 1;
    system.add_equality(std::move(row), value, describe(f.ground, set));
  }
  return system;
}

std::vector<Rational> integer_scaled(std::vector<Rational> v) {
  mpz_class den = 1;
  for (const auto& r : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
  mpz_class num = 0;
  for (auto& r : v) {
    r *= Rational(den);
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), r.get_num_mpz_t());
  }
  if (num > 1) {
    for (auto& r : v) r /= Rational(num);
  }
  return v;
}

std::vector<Rational> farkas_rows(const FeasibilityOutcome& out) {
  std::vector<Rational> rows = out.equality_multipliers;
  for (std::size_t i = 0; i < out.lower_multipliers.size(); ++i) {
    rows.push_back(out.lower_multipliers[i] - out.upper_multipliers[i]);
  }
  return rows;
}

void require_scan_size(const Algebra& a) {
  if (a.atom_count() > kScanAtomCap) throw CapacityError("algebra too large for an exhaustive scan");
}

SetElem meet(const GroundSet& g, std::span<const SetElem> gens) {
  SetElem core = g.full();
  for (const auto& b : gens) {
    g.require(b, "generator");
    core &= b;
  }
  return core;
}

// Positive atom of the fam disjoint from the core, if any.
std::optional<Certificate> meet_violation(const Fam& fam, std::span<const SetElem> gens, const SetElem& core,
                                          int side) {
  const auto& atoms = fam.algebra().atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (fam.weight(i) == 0 || atoms[i].intersects(core)) continue;
    Certificate c;
    c.kind = Certificate::Kind::filter_meet;
    c.a = atoms[i];
    c.side = side;
    for (const auto& g : gens) {
      if (!g.intersects(atoms[i])) {
        c.generators = {g};
        break;
      }
    }
    if (c.generators.empty()) c.generators.assign(gens.begin(), gens.end());
    c.message = "positive set " + describe(fam.ground(), atoms[i]) + " misses the generators' meet";
    return c;
  }
  return std::nullopt;
}

}  // namespace

void PartialAssignment::validate() const {
  bool has_top = false;
  std::set<SetElem> seen;
  for (const auto& [set, value] : pairs) {
    ground.require(set, "assignment set");
    if (value < 0) throw InputError("assignment values must be nonnegative");
    if (!seen.insert(set).second) throw InputError("assignment lists the set " + describe(ground, set) + " twice");
    if (set == ground.full()) has_top = true;
  }
  if (!has_top) throw InputError("assignment must include the full ground set");
}

Rational PartialAssignment::total() const {
  for (const auto& [set, value] : pairs) {
    if (set == ground.full()) return value;
  }
  throw InputError("assignment must include the full ground set");
}

std::vector<SetElem> PartialAssignment::domain() const {
  std::vector<SetElem> out;
  for (const auto& p : pairs) out.push_back(p.first);
  return out;
}

ExtensionResult extend_assignment(const PartialAssignment& assignment) {
  assignment.validate();
  auto dom = assignment.domain();
  auto algebra = generate_algebra(assignment.ground, dom);
  auto system = assignment_system(assignment, algebra);
  auto out = solve_feasibility(system);
  ExtensionResult result;
  if (out.feasible) {
    result.feasible = true;
    result.witness = Fam(std::move(algebra), std::move(out.point));
    return result;
  }
  // y·A <= 0 and y·f > 0, so h = −y is nonnegative on every atom while
  // Σ h(a) f(a) < 0.
  std::vector<Rational> h;
  for (const auto& y : out.equality_multipliers) h.push_back(-y);
  result.certificate.kind = Certificate::Kind::separating_h;
  result.certificate.h = integer_scaled(std::move(h));
  result.certificate.message = "no nonnegative atom weights match the assignment";
  return result;
}

bool refutes(const PartialAssignment& assignment, std::span<const Rational> h) {
  if (h.size() != assignment.pairs.size()) return false;
  for (std::size_t x = 0; x < assignment.ground.size(); ++x) {
    Rational at = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (assignment.pairs[i].first.test(x)) at += h[i];
    }
    if (at < 0) return false;
  }
  Rational pairing = 0;
  for (std::size_t i = 0; i < h.size(); ++i) pairing += h[i] * assignment.pairs[i].second;
  return pairing < 0;
}

std::optional<std::pair<Rational, Rational>> extension_bounds(const PartialAssignment& assignment,
                                                              const SetElem& b) {
  assignment.validate();
  assignment.ground.require(b, "bounded set");
  auto gens = assignment.domain();
  gens.push_back(b);
  auto algebra = generate_algebra(assignment.ground, gens);
  auto system = assignment_system(assignment, algebra);
  std::vector<Rational> objective(algebra.atom_count(), Rational(0));
  for (auto i : algebra.atoms_inside(b)) objective[i] = 1;
  auto lo = minimize(system, objective);
  if (lo.status != OptimumStatus::optimal) return std::nullopt;
  auto hi = maximize(system, objective);
  return std::make_pair(lo.value, hi.value);
}

PartialAssignment merge_assignment(const Fam& fam0, const Fam& fam1) {
  if (!(fam0.ground() == fam1.ground())) throw InputError("fams live on different ground sets");
  PartialAssignment f{fam0.ground(), {}};
  std::map<SetElem, Rational> values;
  auto add = [&](const SetElem& s, const Rational& v) {
    auto [it, fresh] = values.emplace(s, v);
    if (!fresh && it->second != v) {
      throw DomainError("fams disagree on the shared set " + describe(f.ground, s));
    }
  };
  values.emplace(fam0.ground().full(), fam0.total());
  for (std::size_t i = 0; i < fam0.algebra().atom_count(); ++i) add(fam0.algebra().atoms()[i], fam0.weight(i));
  for (std::size_t i = 0; i < fam1.algebra().atom_count(); ++i) add(fam1.algebra().atoms()[i], fam1.weight(i));
  for (auto& [s, v] : values) f.pairs.emplace_back(s, v);
  return f;
}

Compatibility compatible(const Fam& fam0, const Fam& fam1) {
  if (!(fam0.ground() == fam1.ground())) throw InputError("fams live on different ground sets");
  Compatibility out;
  const auto x = fam0.ground().full();
  if (fam0.total() != fam1.total()) {
    out.certificate.kind = Certificate::Kind::order_pair;
    out.certificate.a = x;
    out.certificate.b = x;
    out.certificate.message = "totals differ";
    return out;
  }
  // Conflicting values on a shared atom cannot be merged; the order scan
  // below explains that case directly.
  bool clash = false;
  for (std::size_t i = 0; i < fam0.algebra().atom_count(); ++i) {
    const auto& a = fam0.algebra().atoms()[i];
    if (contains(fam1.algebra(), a) && fam1.eval(a) != fam0.weight(i)) clash = true;
  }
  if (!clash && extend_assignment(merge_assignment(fam0, fam1)).feasible) {
    out.compatible = true;
    return out;
  }
  const auto& b1 = fam1.algebra();
  if (b1.atom_count() > kScanAtomCap) {
    out.certificate.message = "incompatible; algebra too large for a pair scan";
    return out;
  }
  for (std::uint64_t m = 0; m < b1.element_count(); ++m) {
    SetElem a1 = b1.element(m);
    SetElem a0 = floor_in(fam0.algebra(), a1);
    if (fam0.eval(a0) > fam1.eval(a1)) {
      out.certificate.kind = Certificate::Kind::order_pair;
      out.certificate.a = a0;
      out.certificate.b = a1;
      out.certificate.message = "Ξ₀" + describe(fam0.ground(), a0) + " exceeds Ξ₁" + describe(fam0.ground(), a1);
      return out;
    }
  }
  out.certificate.message = "incompatible, but no order pair was found";
  return out;
}

ExtensionResult amalgamate(const Fam& fam0, const Fam& fam1) {
  auto verdict = compatible(fam0, fam1);
  ExtensionResult result;
  if (!verdict.compatible) {
    result.certificate = verdict.certificate;
    return result;
  }
  auto solved = extend_assignment(merge_assignment(fam0, fam1));
  // ⟨atoms of ℬ₀ ∪ atoms of ℬ₁⟩ is the join, so the witness already lives there.
  return solved;
}

std::pair<Rational, Rational> extension_bounds(const Fam& fam, const SetElem& b) {
  fam.ground().require(b, "bounded set");
  return {fam.eval(floor_in(fam.algebra(), b)), fam.eval(ceil_in(fam.algebra(), b))};
}

Fam extend_one(const Fam& fam, const SetElem& b, const Rational& z) {
  auto [lo, hi] = extension_bounds(fam, b);
  if (z < lo || z > hi) throw DomainError("target value lies outside the extension bounds");
  const auto& algebra = fam.algebra();
  std::vector<std::pair<SetElem, Rational>> pieces;
  Rational needed = z - lo;
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    const auto& a = algebra.atoms()[i];
    SetElem in = a & b;
    SetElem out = a.minus(b);
    if (out.empty() || in.empty()) {
      pieces.emplace_back(a, fam.weight(i));
      continue;
    }
    Rational give = std::min(needed, fam.weight(i));
    needed -= give;
    pieces.emplace_back(in, give);
    pieces.emplace_back(out, fam.weight(i) - give);
  }
  return Fam::from_pieces(fam.ground(), std::move(pieces));
}

Fam extend_preserving_range(const Fam& fam, const SetElem& b, std::span<const Rational> k) {
  fam.ground().require(b, "new set");
  std::set<Rational> allowed(k.begin(), k.end());
  if (!allowed.count(Rational(0))) throw DomainError("the value set must contain 0");
  require_scan_size(fam.algebra());
  for (std::uint64_t m = 0; m < fam.algebra().element_count(); ++m) {
    if (!allowed.count(fam.eval_mask(m))) throw DomainError("fam takes a value outside the given set");
  }
  const auto& algebra = fam.algebra();
  std::vector<std::pair<SetElem, Rational>> pieces;
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    const auto& a = algebra.atoms()[i];
    SetElem in = a & b;
    SetElem out = a.minus(b);
    if (in.empty() || out.empty()) {
      pieces.emplace_back(a, fam.weight(i));
      continue;
    }
    pieces.emplace_back(in, fam.weight(i));
    pieces.emplace_back(out, 0);
  }
  return Fam::from_pieces(fam.ground(), std::move(pieces));
}

ExtensionResult extend_with_filter(const Fam& fam0, std::span<const SetElem> generators) {
  if (fam0.total() == 0) throw DomainError("filter extension needs a positive total");
  SetElem core = meet(fam0.ground(), generators);
  ExtensionResult result;
  if (auto bad = meet_violation(fam0, generators, core, 0)) {
    result.certificate = *bad;
    return result;
  }
  // On ⟨ℬ₀ ∪ gens⟩ the piece a ∩ ⋂gens of each atom a carries Ξ₀(a) and every
  // other piece is null.
  auto algebra = refine_algebra(fam0.algebra(), generators);
  std::vector<Rational> weights(algebra.atom_count(), Rational(0));
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    const auto& piece = algebra.atoms()[i];
    if (!piece.subset_of(core)) continue;
    weights[i] = fam0.weight(fam0.algebra().atom_of(piece.first()));
  }
  Fam fam(std::move(algebra), std::move(weights));
  for (const auto& g : generators) {
    if (fam.eval(g) != fam.total()) throw std::logic_error("filter extension lost mass on a generator");
  }
  result.feasible = true;
  result.witness = std::move(fam);
  return result;
}

ExtensionResult three_way_extend(const Fam& fam0, const Fam& fam1, std::span<const SetElem> generators) {
  if (!(fam0.ground() == fam1.ground())) throw InputError("fams live on different ground sets");
  if (fam0.total() != fam1.total()) throw DomainError("three-way extension needs equal totals");
  if (fam0.total() == 0) throw DomainError("three-way extension needs a positive total");
  SetElem core = meet(fam0.ground(), generators);
  ExtensionResult result;

  // First condition: every positive set of either fam meets the core. Meets
  // over smaller J are larger, so J = all generators is the binding case.
  if (auto bad = meet_violation(fam0, generators, core, 0)) {
    result.certificate = *bad;
    return result;
  }
  if (auto bad = meet_violation(fam1, generators, core, 1)) {
    result.certificate = *bad;
    return result;
  }
  // Second condition: for positive a ∈ ℬ₀ the least b ∈ ℬ₁ with
  // a ∩ C ⊆ b ∩ C is ceil_{ℬ₁}(a ∩ C).
  require_scan_size(fam0.algebra());
  for (std::uint64_t m = 0; m < fam0.algebra().element_count(); ++m) {
    SetElem a = fam0.algebra().element(m);
    Rational va = fam0.eval_mask(m);
    if (va == 0) continue;
    SetElem b = ceil_in(fam1.algebra(), a & core);
    if (va > fam1.eval(b)) {
      result.certificate.kind = Certificate::Kind::filter_order;
      result.certificate.a = a;
      result.certificate.b = b;
      result.certificate.generators.assign(generators.begin(), generators.end());
      result.certificate.message = "Ξ₀" + describe(fam0.ground(), a) + " exceeds Ξ₁" +
                                   describe(fam0.ground(), b) + " inside the generators' meet";
      return result;
    }
  }
  auto e0 = extend_with_filter(fam0, generators);
  auto e1 = extend_with_filter(fam1, generators);
  auto joined = amalgamate(*e0.witness, *e1.witness);
  if (!joined.feasible) throw std::logic_error("filter conditions hold but the amalgamation failed");
  return joined;
}

TargetSet TargetSet::between(Rational lo, Rational hi) {
  if (lo > hi) throw InputError("interval lower end exceeds upper end");
  TargetSet t;
  t.interval = std::make_pair(std::move(lo), std::move(hi));
  return t;
}

TargetSet TargetSet::one_of(std::vector<Rational> values) {
  if (values.empty()) throw InputError("finite target set is empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  TargetSet t;
  t.points = std::move(values);
  return t;
}

bool TargetSet::contains(const Rational& v) const {
  if (interval) return interval->first <= v && v <= interval->second;
  return std::binary_search(points.begin(), points.end(), v);
}

namespace {

constexpr std::size_t kBranchCap = 1u << 14;

// Solves `base` plus one range row per target, expanding finite targets into
// branches of point constraints.
ExtensionResult solve_targets(const FeasibilitySystem& base, const std::vector<std::vector<Rational>>& rows,
                              std::span<const TargetSet> targets, const Algebra& algebra) {
  std::size_t branches = 1;
  for (const auto& t : targets) {
    if (t.interval) continue;
    branches *= t.points.size();
    if (branches > kBranchCap) throw CapacityError("too many finite-target branches");
  }
  ExtensionResult result;
  std::vector<std::size_t> choice(targets.size(), 0);
  for (std::size_t branch = 0; branch < branches; ++branch) {
    std::size_t rest = branch;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i].interval) continue;
      choice[i] = rest % targets[i].points.size();
      rest /= targets[i].points.size();
    }
    FeasibilitySystem system = base;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i].interval) {
        system.add_range(rows[i], targets[i].interval->first, targets[i].interval->second);
      } else {
        system.add_range(rows[i], targets[i].points[choice[i]], targets[i].points[choice[i]]);
      }
    }
    auto out = solve_feasibility(system);
    if (out.feasible) {
      result.feasible = true;
      result.witness = Fam(algebra, std::move(out.point));
      return result;
    }
    if (branches == 1) {
      result.certificate.kind = Certificate::Kind::farkas_rows;
      result.certificate.h = farkas_rows(out);
    }
  }
  result.certificate.message = "infeasible in all " + std::to_string(branches) + " target branches";
  return result;
}

}  // namespace

ExtensionResult fam_with_constraints(const GroundSet& ground, std::span<const SetElem> sets,
                                     std::span<const TargetSet> targets, const Rational& delta) {
  if (sets.size() != targets.size()) throw InputError("one target per set is required");
  if (delta < 0) throw InputError("total must be nonnegative");
  for (const auto& t : targets) {
    if (t.interval && (t.interval->first < 0 || t.interval->second > delta)) {
      throw InputError("target interval must lie within [0, total]");
    }
  }
  auto algebra = generate_algebra(ground, sets);
  FeasibilitySystem base(algebra.atom_count());
  base.add_equality(std::vector<Rational>(algebra.atom_count(), Rational(1)), delta, "X");
  std::vector<std::vector<Rational>> rows;
  for (const auto& s : sets) {
    std::vector<Rational> row(algebra.atom_count(), Rational(0));
    for (auto i : algebra.atoms_inside(s)) row[i] = 1;
    rows.push_back(std::move(row));
  }
  return solve_targets(base, rows, targets, algebra);
}

ExtensionResult fam_with_integral_constraints(const Fam& fam0, std::span<const ExactFn> fns,
                                              std::span<const TargetSet> targets) {
  if (fns.size() != targets.size()) throw InputError("one target per function is required");
  const std::size_t n = fam0.ground().size();
  auto power = Algebra::power_set(fam0.ground());
  FeasibilitySystem base(n);
  for (std::size_t i = 0; i < fam0.algebra().atom_count(); ++i) {
    std::vector<Rational> row(n, Rational(0));
    for (auto x : fam0.algebra().atoms()[i].indices()) row[x] = 1;
    base.add_equality(std::move(row), fam0.weight(i));
  }
  std::vector<std::vector<Rational>> rows;
  for (const auto& f : fns) {
    if (f.size() != n) throw InputError("function table must give one value per ground point");
    rows.push_back(f);
  }
  return solve_targets(base, rows, targets, power);
}

ExtensionResult ultrafilter_with_limits(const Fam& ultra0, std::span<const ExactFn> fns,
                                        std::span<const TargetSet> targets) {
  if (fns.size() != targets.size()) throw InputError("one target per function is required");
  std::optional<std::size_t> top;
  for (std::size_t i = 0; i < ultra0.algebra().atom_count(); ++i) {
    const auto& w = ultra0.weight(i);
    if (w != 0 && w != 1) throw DomainError("ultrafilter fam must be 0/1-valued");
    if (w == 1) top = i;
  }
  if (!top || ultra0.total() != 1) throw DomainError("ultrafilter fam must have total 1");
  const SetElem& core = ultra0.algebra().atoms()[*top];
  ExtensionResult result;
  for (auto z : core.indices()) {
    bool ok = true;
    for (std::size_t i = 0; i < fns.size() && ok; ++i) {
      if (fns[i].size() != ultra0.ground().size()) throw InputError("function table must give one value per ground point");
      ok = targets[i].contains(fns[i][z]);
    }
    if (!ok) continue;
    result.feasible = true;
    result.witness = uniform_fam(ultra0.ground(), SetElem{z});
    return result;
  }
  result.certificate.kind = Certificate::Kind::no_point;
  result.certificate.a = core;
  result.certificate.message = "no point of the ultrafilter core meets every target";
  return result;
}

}  // namespace famkit
