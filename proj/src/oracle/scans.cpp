#include "oracle/oracle.hpp"

#include <functional>
#include <optional>

namespace famkit::oracle {

bool scan_separation_condition(const PartialAssignment& assignment, int k) {
  const std::size_t m = assignment.pairs.size();
  if (m > 5 || k > 3 || k < 0) throw CapacityError("separation scan is limited to 5 pairs and k <= 3");
  const std::size_t n = assignment.ground.size();
  std::vector<int> h(m, -k);
  while (true) {
    bool nonneg = true;
    for (std::size_t x = 0; x < n && nonneg; ++x) {
      int at = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (assignment.pairs[i].first.test(x)) at += h[i];
      }
      nonneg = at >= 0;
    }
    if (nonneg) {
      Rational pairing = 0;
      for (std::size_t i = 0; i < m; ++i) pairing += Rational(h[i]) * assignment.pairs[i].second;
      if (pairing < 0) return false;
    }
    std::size_t i = 0;
    while (i < m && h[i] == k) h[i++] = -k;
    if (i == m) return true;
    ++h[i];
  }
}

bool scan_order_condition(const Fam& fam0, const Fam& fam1) {
  if (fam0.algebra().atom_count() > 10 || fam1.algebra().atom_count() > 10) {
    throw CapacityError("order scan is limited to 2^10 elements per algebra");
  }
  if (fam0.total() != fam1.total()) return false;
  for (std::uint64_t i = 0; i < fam0.algebra().element_count(); ++i) {
    SetElem a = fam0.algebra().element(i);
    Rational va = fam0.eval_mask(i);
    for (std::uint64_t j = 0; j < fam1.algebra().element_count(); ++j) {
      SetElem b = fam1.algebra().element(j);
      if (a.subset_of(b) && va > fam1.eval_mask(j)) return false;
    }
  }
  return true;
}

PartitionIntegral exhaustive_integral(const ExactFn& f, const Fam& fam) {
  const auto& atoms = fam.algebra().atoms();
  const std::size_t k = atoms.size();
  if (k > 8) throw CapacityError("partition enumeration is limited to 8 atoms");
  if (f.size() != fam.ground().size()) throw InputError("function table size mismatch");
  // Restricted growth strings enumerate each set partition exactly once.
  std::vector<std::size_t> block(k, 0);
  std::optional<Rational> best_lower, best_upper;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t used) {
    if (i == k) {
      Rational lower = 0, upper = 0;
      for (std::size_t c = 0; c < used; ++c) {
        std::optional<Rational> lo, hi;
        Rational weight = 0;
        for (std::size_t j = 0; j < k; ++j) {
          if (block[j] != c) continue;
          weight += fam.weight(j);
          for (auto x : atoms[j].indices()) {
            if (!lo || f[x] < *lo) lo = f[x];
            if (!hi || f[x] > *hi) hi = f[x];
          }
        }
        lower += *lo * weight;
        upper += *hi * weight;
      }
      if (!best_lower || lower > *best_lower) best_lower = lower;
      if (!best_upper || upper < *best_upper) best_upper = upper;
      return;
    }
    for (std::size_t c = 0; c <= used && c < k; ++c) {
      block[i] = c;
      walk(i + 1, std::max(used, c + 1));
    }
  };
  walk(0, 0);
  return {*best_lower, *best_upper};
}

}  // namespace famkit::oracle
