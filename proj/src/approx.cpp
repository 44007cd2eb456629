#include "famkit/approx.hpp"

#include <algorithm>
#include <string>

namespace famkit {

namespace {

void require_positive(const Fam& fam, const Partition& p, const Rational& epsilon) {
  if (fam.total() == 0) throw DomainError("approximation needs a fam with positive total");
  if (epsilon <= 0) throw InputError("epsilon must be positive");
  if (!p.fits(fam.algebra())) throw InputError("partition cells must be elements of the fam's algebra");
}

std::string describe(const GroundSet& g, const SetElem& s) {
  std::string out = "{";
  for (auto x : s.indices()) {
    if (out.size() > 1) out += ",";
    out += g.label(x);
  }
  return out + "}";
}

// Lowest-index k members of s.
std::vector<std::size_t> lowest(const SetElem& s, std::size_t k) {
  auto idx = s.indices();
  idx.resize(std::min(k, idx.size()));
  return idx;
}

}  // namespace

Rational FiniteApprox::mass(const SetElem& b) const {
  Rational sum = 0;
  for (const auto& [x, m] : mu) {
    if (b.test(x)) sum += m;
  }
  return sum;
}

FiniteApprox approx_uniform(const Fam& fam, const Partition& p, const Rational& epsilon,
                            const SetElem& avoid, AvoidPolicy policy) {
  require_positive(fam, p, epsilon);
  fam.ground().require(avoid, "avoid set");
  const Rational& delta = fam.total();
  mpz_class c = ceil(delta / epsilon);
  Rational c_q(c);

  FiniteApprox out;
  out.uniform = true;
  Rational prefix = 0;
  mpz_class assigned = 0;
  for (const auto& b : p.cells()) {
    Rational value = fam.eval(b);
    prefix += c_q * value / delta;
    // Keeps ⌊Σ_{ℓ<=m} cΞ(b_ℓ)/δ⌋ = Σ_{ℓ<=m} k_ℓ, so k_m is the floor or the
    // ceiling of cΞ(b_m)/δ.
    mpz_class k = floor(prefix) - assigned;
    assigned += k;
    if (k == 0) continue;

    SetElem eligible = b.minus(avoid);
    if (mpz_class(static_cast<unsigned long>(eligible.count())) >= k) {
      for (auto x : lowest(eligible, k.get_ui())) {
        out.u.set(x);
        out.mu[x] = Rational(1) / c_q;
      }
      continue;
    }
    if (eligible.empty() && policy == AvoidPolicy::require) {
      throw DomainError("avoid set exhausts positive cell " + describe(fam.ground(), b));
    }
    std::size_t x = eligible.empty() ? b.first() : eligible.first();
    out.u.set(x);
    out.mu[x] = Rational(k) / c_q;
    out.uniform = false;
  }
  return out;
}

FiniteApprox approx_uniform_small(const Fam& fam, const Partition& p, const Rational& epsilon) {
  require_positive(fam, p, epsilon);
  const Rational& delta = fam.total();
  mpz_class c = ceil(delta / epsilon);
  if (mpz_class(static_cast<unsigned long>(p.size())) > c) return approx_uniform(fam, p, epsilon);
  FiniteApprox out;
  for (const auto& b : p.cells()) {
    Rational value = fam.eval(b);
    if (value == 0) continue;
    out.u.set(b.first());
    out.mu[b.first()] = value / delta;
  }
  Rational first = out.mu.begin()->second;
  out.uniform = std::all_of(out.mu.begin(), out.mu.end(), [&](const auto& kv) { return kv.second == first; });
  return out;
}

std::optional<SetElem> uap_witness(const Fam& fam, const Partition& p, const Rational& epsilon) {
  require_positive(fam, p, epsilon);
  const Rational& delta = fam.total();
  const auto& algebra = fam.algebra();

  if (auto support = uniformly_supported(fam)) {
    // ℓ_a = d·Ξ(a)/δ points from each atom give |u∩b|/|u| = Ξ(b)/δ exactly.
    SetElem u;
    for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
      Rational ell = Rational(support->d) * fam.weight(i) / delta;
      for (auto x : lowest(algebra.atoms()[i], ell.get_num().get_ui())) u.set(x);
    }
    return u;
  }

  // The inequality depends only on the counts n_b = |u∩b|, so search count
  // vectors: n_b ∈ (N(Ξ(b)−ε)/δ, N(Ξ(b)+ε)/δ) ∩ [0,|b|] with Σ n_b = N.
  std::size_t n = fam.ground().size();
  for (std::size_t big_n = 1; big_n <= n; ++big_n) {
    Rational scale = Rational(static_cast<unsigned long>(big_n)) / delta;
    std::vector<long> lo, hi;
    long lo_sum = 0, hi_sum = 0;
    bool ok = true;
    for (const auto& b : p.cells()) {
      Rational value = fam.eval(b);
      Rational left = (value - epsilon) * scale;
      Rational right = (value + epsilon) * scale;
      mpz_class l = floor(left) + 1;
      mpz_class r = ceil(right) - 1;
      long l0 = std::max(0L, l.get_si());
      long r0 = std::min(static_cast<long>(b.count()), r.get_si());
      if (l0 > r0) {
        ok = false;
        break;
      }
      lo.push_back(l0);
      hi.push_back(r0);
      lo_sum += l0;
      hi_sum += r0;
    }
    if (!ok || lo_sum > static_cast<long>(big_n) || hi_sum < static_cast<long>(big_n)) continue;
    long spare = static_cast<long>(big_n) - lo_sum;
    SetElem u;
    for (std::size_t i = 0; i < p.size(); ++i) {
      long extra = std::min(spare, hi[i] - lo[i]);
      spare -= extra;
      for (auto x : lowest(p.cells()[i], static_cast<std::size_t>(lo[i] + extra))) u.set(x);
    }
    return u;
  }
  return std::nullopt;
}

FiniteApprox approx_with_integrals(const Fam& fam, const Partition& p, const Rational& epsilon,
                                   std::span<const ExactFn> fns) {
  require_positive(fam, p, epsilon);
  if (fns.empty()) return approx_uniform_small(fam, p, epsilon);
  const auto& algebra = fam.algebra();
  const std::size_t n = fam.ground().size();

  // Pⁱ groups atoms sharing the same (inf, sup) of fᵢ; its lower and upper
  // sums equal the exact lower and upper integrals on this algebra.
  Partition refined = p;
  Rational bound = 1;
  for (const auto& f : fns) {
    if (f.size() != n) throw InputError("function table must give one value per ground point");
    std::map<std::pair<Rational, Rational>, SetElem> groups;
    for (const auto& a : algebra.atoms()) {
      auto pts = a.indices();
      Rational lo = f[pts[0]], hi = f[pts[0]];
      for (auto x : pts) {
        lo = std::min(lo, f[x]);
        hi = std::max(hi, f[x]);
        if (abs(f[x]) >= bound) bound = abs(f[x]) + 1;
      }
      groups[{lo, hi}] |= a;
    }
    std::vector<SetElem> cells;
    for (auto& [key, cell] : groups) cells.push_back(cell);
    refined = meet_partitions(refined, Partition(algebra, std::move(cells)));
  }
  Rational size(static_cast<unsigned long>(refined.size()));
  return approx_uniform_small(fam, refined, epsilon / (4 * bound * size));
}

}  // namespace famkit
