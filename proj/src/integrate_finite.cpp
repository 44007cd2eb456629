#include "famkit/integrate.hpp"

#include <algorithm>
#include <map>

namespace famkit {

std::string to_string(Status status) {
  switch (status) {
    case Status::integrable: return "integrable";
    case Status::not_integrable: return "not_integrable";
    case Status::undecided: return "undecided";
  }
  return "undecided";
}

namespace {

void require_table(const ExactFn& f, const Fam& fam) {
  if (f.size() != fam.ground().size()) throw InputError("function table size does not match the ground set");
}

std::pair<Rational, Rational> bounds_on(const ExactFn& f, const SetElem& cell) {
  auto idx = cell.indices();
  Rational lo = f[idx.front()], hi = lo;
  for (auto x : idx) {
    if (f[x] < lo) lo = f[x];
    if (f[x] > hi) hi = f[x];
  }
  return {lo, hi};
}

}  // namespace

Rational supsum(const ExactFn& f, const Partition& p, const Fam& fam) {
  require_table(f, fam);
  if (!p.fits(fam.algebra())) throw InputError("partition is not over the fam's algebra");
  Rational s = 0;
  for (const auto& cell : p.cells()) s += bounds_on(f, cell).second * fam.eval(cell);
  return s;
}

Rational infsum(const ExactFn& f, const Partition& p, const Fam& fam) {
  require_table(f, fam);
  if (!p.fits(fam.algebra())) throw InputError("partition is not over the fam's algebra");
  Rational s = 0;
  for (const auto& cell : p.cells()) s += bounds_on(f, cell).first * fam.eval(cell);
  return s;
}

ExactIntegral integrate(const ExactFn& f, const Fam& fam) {
  require_table(f, fam);
  ExactIntegral out;
  const auto& atoms = fam.algebra().atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto [lo, hi] = bounds_on(f, atoms[i]);
    out.lower += lo * fam.weight(i);
    out.upper += hi * fam.weight(i);
  }
  out.integrable = out.lower == out.upper;
  if (out.integrable) out.value = out.lower;
  return out;
}

ExactIntegral integrate_over(const ExactFn& f, const SetElem& e, const Fam& fam) {
  require_table(f, fam);
  fam.ground().require(e, "integration set");
  ExactFn g(f.size());
  for (auto x : e.indices()) g[x] = f[x];
  return integrate(g, fam);
}

Rational outer_measure(const SetElem& e, const Fam& fam) {
  fam.ground().require(e, "measured set");
  return fam.eval(ceil_in(fam.algebra(), e));
}

Rational inner_measure(const SetElem& e, const Fam& fam) {
  fam.ground().require(e, "measured set");
  return fam.eval(floor_in(fam.algebra(), e));
}

ExactJordan is_jordan(const SetElem& e, const Fam& fam) {
  fam.ground().require(e, "measured set");
  ExactJordan out;
  out.a = floor_in(fam.algebra(), e);
  out.b = ceil_in(fam.algebra(), e);
  out.inner = fam.eval(out.a);
  out.outer = fam.eval(out.b);
  out.jordan = out.inner == out.outer;
  return out;
}

Fam jordan_completion(const Fam& fam) {
  std::vector<std::pair<SetElem, Rational>> pieces;
  const auto& atoms = fam.algebra().atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (fam.weight(i) > 0) {
      pieces.emplace_back(atoms[i], fam.weight(i));
    } else {
      for (auto x : atoms[i].indices()) pieces.emplace_back(SetElem{x}, Rational(0));
    }
  }
  return Fam::from_pieces(fam.ground(), std::move(pieces));
}

ExactFn simple_table(std::span<const std::pair<SetElem, Rational>> cells, std::size_t n) {
  ExactFn f(n);
  SetElem seen;
  for (const auto& [e, c] : cells) {
    if (e.extent() > n) throw InputError("simple-function cell outside the ground set");
    if (e.intersects(seen)) throw InputError("simple-function cells overlap");
    seen |= e;
    for (auto x : e.indices()) f[x] = c;
  }
  return f;
}

ExactSimple integrate_simple(std::span<const std::pair<SetElem, Rational>> cells, const Fam& fam) {
  auto n = fam.ground().size();
  ExactSimple out;
  auto f = simple_table(cells, n);
  out.integral = integrate(f, fam);
  std::map<Rational, SetElem> levels;
  for (std::size_t x = 0; x < n; ++x) levels[f[x]].set(x);
  for (const auto& [c, e] : levels) out.level_sets_jordan.emplace_back(c, is_jordan(e, fam).jordan);
  return out;
}

Rational oscillation(const ExactFn& f, const Fam& fam, std::size_t atom) {
  require_table(f, fam);
  auto [lo, hi] = bounds_on(f, fam.algebra().atoms().at(atom));
  return hi - lo;
}

std::optional<Rational> ultrafilter_integrate(const ExactFn& f, const Fam& fam, std::size_t atom) {
  require_table(f, fam);
  auto [lo, hi] = bounds_on(f, fam.algebra().atoms().at(atom));
  if (lo != hi) return std::nullopt;
  return lo;
}

PushforwardCheck pushforward_integral_check(const ExactFn& f_on_y, std::span<const std::size_t> map,
                                            const GroundSet& target, const Fam& fam) {
  if (f_on_y.size() != target.size()) throw InputError("function table size does not match the target set");
  auto image = pushforward(fam, map, target);
  ExactFn pulled(map.size());
  for (std::size_t x = 0; x < map.size(); ++x) pulled[x] = f_on_y[map[x]];
  PushforwardCheck out;
  out.lhs = integrate(f_on_y, image);
  out.rhs = integrate(pulled, fam);
  out.equal = out.lhs.integrable ? (out.rhs.integrable && *out.lhs.value == *out.rhs.value)
                                 : (out.lhs.lower == out.rhs.lower && out.lhs.upper == out.rhs.upper);
  std::vector<std::size_t> sorted(map.begin(), map.end());
  std::sort(sorted.begin(), sorted.end());
  out.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  if (out.injective) out.same_integrability = out.lhs.integrable == out.rhs.integrable;
  return out;
}

ConvergenceReport xi_star_converges(std::span<const ExactFn> seq, const ExactFn& f, const Fam& fam,
                                    std::span<const Rational> eps_grid) {
  require_table(f, fam);
  for (const auto& fn : seq) require_table(fn, fam);
  ConvergenceReport out;
  out.converges = !seq.empty();
  for (const auto& eps : eps_grid) {
    if (eps <= 0) throw InputError("deviation thresholds must be positive");
    ConvergenceRow row;
    row.eps = eps;
    for (const auto& fn : seq) {
      SetElem dev;
      for (std::size_t x = 0; x < f.size(); ++x) {
        if (abs(fn[x] - f[x]) >= eps) dev.set(x);
      }
      row.outer.push_back(outer_measure(dev, fam));
    }
    std::size_t n = row.outer.size();
    while (n > 0 && row.outer[n - 1] == 0) --n;
    row.converges = n < row.outer.size();
    if (row.converges) row.settled_at = n;
    out.converges = out.converges && row.converges;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace famkit
