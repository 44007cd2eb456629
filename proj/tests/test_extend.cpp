#include "famkit/extend.hpp"
#include "oracle/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace famkit;

namespace {

Rational q(long p, unsigned long d = 1) { return make_rational(p, d); }

// Points (i, j) of {0,1}² are indexed 2i + j.
const SetElem kVertical0{0, 1};
const SetElem kHorizontal0{0, 2};
const SetElem kCorner11{3};

Fam vertical_fam() {
  return Fam(Algebra(GroundSet(4), {kVertical0, {2, 3}}), {q(1, 3), q(2, 3)});
}
Fam horizontal_fam() {
  return Fam(Algebra(GroundSet(4), {kHorizontal0, {1, 3}}), {q(1, 2), q(1, 2)});
}

bool extends(const Fam& big, const Fam& small) {
  for (std::uint64_t m = 0; m < small.algebra().element_count(); ++m) {
    if (big.eval(small.algebra().element(m)) != small.eval_mask(m)) return false;
  }
  return true;
}

Fam random_fam_on(std::mt19937_64& rng, const GroundSet& g, std::size_t max_atoms, const Rational& total) {
  std::size_t n = g.size();
  std::vector<SetElem> cells(std::min(n, 1 + rng() % max_atoms));
  for (std::size_t x = 0; x < n; ++x) cells[rng() % cells.size()].set(x);
  std::erase_if(cells, [](const SetElem& s) { return s.empty(); });
  std::vector<Rational> w(cells.size());
  Rational sum = 0;
  for (auto& v : w) {
    v = q(static_cast<long>(rng() % 4));
    sum += v;
  }
  if (sum == 0) {
    w[0] = 1;
    sum = 1;
  }
  for (auto& v : w) v = v * total / sum;
  return Fam(Algebra(g, cells), w);
}

}  // namespace

TEST_CASE("extend_assignment examples") {
  GroundSet g(4);
  PartialAssignment single{g, {{g.full(), q(1)}}};
  auto r = extend_assignment(single);
  REQUIRE(r.feasible);
  CHECK(r.witness->algebra().atom_count() == 1);
  CHECK(r.witness->total() == 1);

  PartialAssignment cross{g, {{g.full(), q(1)}, {kVertical0, q(1, 3)}, {kHorizontal0, q(1, 2)}}};
  auto c = extend_assignment(cross);
  REQUIRE(c.feasible);
  auto corner = c.witness->eval(kCorner11);
  CHECK(corner >= q(1, 6));
  CHECK(corner <= q(1, 2));

  SetElem a{0, 1};
  PartialAssignment bad{g, {{g.full(), q(1)}, {a, q(2, 3)}, {a.complement(4), q(2, 3)}}};
  auto b = extend_assignment(bad);
  REQUIRE_FALSE(b.feasible);
  CHECK(b.certificate.kind == Certificate::Kind::separating_h);
  CHECK(refutes(bad, b.certificate.h));
  // h(X) = 1, h(a) = h(X∖a) = −1 pairs to 1 − 4/3 < 0 against a zero indicator sum.
  CHECK(b.certificate.h == std::vector<Rational>{q(1), q(-1), q(-1)});
}

TEST_CASE("assignment validation") {
  GroundSet g(3);
  CHECK_THROWS_AS(extend_assignment({g, {{SetElem{0}, q(1)}}}), InputError);
  CHECK_THROWS_AS(extend_assignment({g, {{g.full(), q(1)}, {SetElem{0}, q(-1)}}}), InputError);
  CHECK_THROWS_AS(extend_assignment({g, {{g.full(), q(1)}, {g.full(), q(1)}}}), InputError);
}

TEST_CASE("cross-section bounds under the merged system") {
  auto merged = merge_assignment(vertical_fam(), horizontal_fam());
  auto bounds = extension_bounds(merged, kCorner11);
  REQUIRE(bounds);
  CHECK(bounds->first == q(1, 6));
  CHECK(bounds->second == q(1, 2));
  CHECK(extension_bounds(vertical_fam(), kCorner11) == std::make_pair(q(0), q(2, 3)));
}

TEST_CASE("compatibility and amalgamation") {
  auto v = vertical_fam();
  auto h = horizontal_fam();
  CHECK(compatible(v, v).compatible);
  CHECK(compatible(v, h).compatible);
  auto joined = amalgamate(v, h);
  REQUIRE(joined.feasible);
  CHECK(extends(*joined.witness, v));
  CHECK(extends(*joined.witness, h));
  auto self = amalgamate(v, v);
  REQUIRE(self.feasible);
  CHECK(*self.witness == v);

  Fam other(v.algebra(), {q(1, 2), q(1, 2)});
  auto verdict = compatible(v, other);
  CHECK_FALSE(verdict.compatible);
  CHECK(verdict.certificate.kind == Certificate::Kind::order_pair);
  CHECK(v.eval(verdict.certificate.a) > other.eval(verdict.certificate.b));
  CHECK(verdict.certificate.a.subset_of(verdict.certificate.b));

  Fam heavier(v.algebra(), {q(1), q(1)});
  auto mismatch = compatible(v, heavier);
  CHECK(mismatch.certificate.a == v.ground().full());
  CHECK(mismatch.certificate.b == v.ground().full());

  auto p0 = uniform_fam(GroundSet(4), {0});
  auto p3 = uniform_fam(GroundSet(4), {3});
  CHECK_FALSE(amalgamate(p0, p3).feasible);
}

TEST_CASE("extension bounds on a single fam") {
  auto v = vertical_fam();
  CHECK(extension_bounds(v, kVertical0) == std::make_pair(q(1, 3), q(1, 3)));
  auto trivial = Fam(Algebra::trivial(GroundSet(4)), {q(1)});
  CHECK(extension_bounds(trivial, {1}) == std::make_pair(q(0), q(1)));
}

TEST_CASE("extend_one") {
  auto trivial = Fam(Algebra::trivial(GroundSet(4)), {q(1)});
  auto e = extend_one(trivial, {0, 1}, q(1, 3));
  CHECK(e.eval({0, 1}) == q(1, 3));
  CHECK(e.eval({2, 3}) == q(2, 3));
  auto v = vertical_fam();
  auto low = extend_one(v, kCorner11, q(0));
  CHECK(low.eval(kCorner11) == 0);
  auto high = extend_one(v, kCorner11, q(2, 3));
  CHECK(high.eval(kCorner11) == q(2, 3));
  CHECK(extends(high, v));
  CHECK_THROWS_AS(extend_one(v, kCorner11, q(3, 4)), DomainError);
}

TEST_CASE("extend_preserving_range") {
  auto v = vertical_fam();
  std::vector<Rational> k{q(0), q(1, 3), q(2, 3), q(1)};
  CHECK(extend_preserving_range(v, kVertical0, k) == v);
  Fam pair(Algebra(GroundSet(4), {{0, 1}, {2, 3}}), {q(1, 2), q(1, 2)});
  std::vector<Rational> halves{q(0), q(1, 2), q(1)};
  auto e = extend_preserving_range(pair, {0, 2}, halves);
  CHECK(contains(e.algebra(), SetElem{0, 2}));
  for (std::uint64_t m = 0; m < e.algebra().element_count(); ++m) {
    CHECK(std::find(halves.begin(), halves.end(), e.eval_mask(m)) != halves.end());
  }
  CHECK(extends(e, pair));
  std::vector<Rational> no_zero{q(1, 2), q(1)};
  CHECK_THROWS_AS(extend_preserving_range(pair, {0, 2}, no_zero), DomainError);
  std::vector<Rational> narrow{q(0), q(1)};
  CHECK_THROWS_AS(extend_preserving_range(pair, {0, 2}, narrow), DomainError);
}

TEST_CASE("ultrafilter extensions stay 0/1-valued") {
  std::mt19937_64 rng(31);
  std::vector<Rational> k{q(0), q(1)};
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng() % 6;
    GroundSet g(n);
    std::vector<SetElem> gens{SetElem::from_indices(std::vector<std::size_t>{rng() % n})};
    auto base = generate_algebra(g, gens);
    std::vector<SetElem> filter_gens{base.atoms()[rng() % base.atom_count()]};
    auto ultra = filter_fam(base, filter_gens);
    SetElem b;
    for (std::size_t x = 0; x < n; ++x) {
      if (rng() & 1u) b.set(x);
    }
    auto e = extend_preserving_range(ultra, b, k);
    for (std::uint64_t m = 0; m < e.algebra().element_count(); ++m) {
      auto val = e.eval_mask(m);
      CHECK((val == 0 || val == 1));
    }
  }
}

TEST_CASE("extend_with_filter") {
  auto v = vertical_fam();
  std::vector<SetElem> whole{SetElem::full(4)};
  auto same = extend_with_filter(v, whole);
  REQUIRE(same.feasible);
  CHECK(*same.witness == v);

  GroundSet six(6);
  SetElem evens{0, 2, 4};
  Fam f0(Algebra(six, {evens, evens.complement(6)}), {q(2, 3), q(1, 3)});
  std::vector<SetElem> pair{{0, 1}};
  auto e = extend_with_filter(f0, pair);
  REQUIRE(e.feasible);
  CHECK(e.witness->eval({0}) == q(2, 3));
  CHECK(e.witness->eval({1}) == q(1, 3));
  CHECK(e.witness->eval({0, 1}) == 1);

  std::vector<SetElem> away{{3, 5}};
  Fam positive(Algebra(six, {evens, evens.complement(6)}), {q(1, 2), q(1, 2)});
  auto bad = extend_with_filter(positive, away);
  REQUIRE_FALSE(bad.feasible);
  CHECK(bad.certificate.kind == Certificate::Kind::filter_meet);
  CHECK(bad.certificate.a == evens);
  CHECK(bad.certificate.generators == away);
}

TEST_CASE("three_way_extend") {
  auto v = vertical_fam();
  auto h = horizontal_fam();
  std::vector<SetElem> whole{SetElem::full(4)};
  auto plain = three_way_extend(v, h, whole);
  REQUIRE(plain.feasible);
  CHECK(extends(*plain.witness, v));
  CHECK(extends(*plain.witness, h));

  std::vector<SetElem> row{kHorizontal0};
  auto with_row = three_way_extend(v, h, row);
  // Ξ(X⁰) must be 1 but Ξ₁(X⁰) = 1/2: the positive set {1,3} misses X⁰.
  CHECK_FALSE(with_row.feasible);
  CHECK(with_row.certificate.kind == Certificate::Kind::filter_meet);
  CHECK(with_row.certificate.side == 1);

  auto self = three_way_extend(v, v, row);
  auto single = extend_with_filter(v, row);
  CHECK(self.feasible == single.feasible);
}

TEST_CASE("constrained existence") {
  GroundSet g(4);
  std::vector<SetElem> one{{0, 1}};
  std::vector<TargetSet> any{TargetSet::between(q(0), q(1))};
  CHECK(fam_with_constraints(g, one, any, q(1)).feasible);

  std::vector<SetElem> disjoint{{0, 1}, {2, 3}};
  std::vector<TargetSet> heavy{TargetSet::between(q(3, 4), q(1)), TargetSet::between(q(3, 4), q(1))};
  auto none = fam_with_constraints(g, disjoint, heavy, q(1));
  CHECK_FALSE(none.feasible);
  CHECK(none.certificate.kind == Certificate::Kind::farkas_rows);

  GroundSet seven(7);
  std::vector<SetElem> two{{0, 2, 4}, {1, 3, 5}};
  std::vector<TargetSet> quarter{TargetSet::one_of({q(1, 4)}), TargetSet::one_of({q(1, 4)})};
  auto r = fam_with_constraints(seven, two, quarter, q(1));
  REQUIRE(r.feasible);
  CHECK(r.witness->eval({0, 2, 4}) == q(1, 4));
  CHECK(r.witness->eval({6}) == q(1, 2));

  std::vector<TargetSet> choose{TargetSet::one_of({q(1, 4), q(3, 4)}), TargetSet::one_of({q(1, 2), q(3, 4)})};
  auto branch = fam_with_constraints(g, disjoint, choose, q(1));
  REQUIRE(branch.feasible);
  CHECK(branch.witness->eval({0, 1}) == q(1, 4));

  std::vector<TargetSet> outside{TargetSet::between(q(0), q(2))};
  CHECK_THROWS_AS(fam_with_constraints(g, one, outside, q(1)), InputError);
  CHECK_THROWS_AS(TargetSet::between(q(1), q(0)), InputError);
}

TEST_CASE("integral constraints") {
  GroundSet g(3);
  auto trivial = Fam(Algebra::trivial(g), {q(1)});
  std::vector<ExactFn> none_f;
  std::vector<TargetSet> none_t;
  CHECK(fam_with_integral_constraints(trivial, none_f, none_t).feasible);

  std::vector<ExactFn> id{{q(0), q(1), q(2)}};
  std::vector<TargetSet> one{TargetSet::between(q(1), q(1))};
  auto r = fam_with_integral_constraints(trivial, id, one);
  REQUIRE(r.feasible);
  Rational integral = 0;
  for (std::size_t x = 0; x < 3; ++x) integral += id[0][x] * r.witness->eval({x});
  CHECK(integral == 1);

  std::vector<ExactFn> chi{{q(1), q(1), q(0)}};
  std::vector<TargetSet> half{TargetSet::between(q(1, 2), q(1, 2))};
  std::vector<SetElem> e{{0, 1}};
  CHECK(fam_with_integral_constraints(trivial, chi, half).feasible ==
        fam_with_constraints(g, e, half, q(1)).feasible);

  std::vector<TargetSet> three{TargetSet::between(q(3), q(3))};
  CHECK_FALSE(fam_with_integral_constraints(trivial, id, three).feasible);
}

TEST_CASE("ultrafilter_with_limits") {
  GroundSet g(6);
  std::vector<SetElem> core_gen{{2, 3}};
  auto ultra = filter_fam(generate_algebra(g, core_gen), core_gen);
  std::vector<ExactFn> none_f;
  std::vector<TargetSet> none_t;
  auto any = ultrafilter_with_limits(ultra, none_f, none_t);
  REQUIRE(any.feasible);
  CHECK(any.witness->eval({2}) == 1);

  std::vector<ExactFn> id{{q(0), q(1), q(2), q(3), q(4), q(5)}};
  std::vector<TargetSet> three{TargetSet::between(q(3), q(3))};
  auto at3 = ultrafilter_with_limits(ultra, id, three);
  REQUIRE(at3.feasible);
  CHECK(at3.witness->eval({3}) == 1);
  CHECK(extends(*at3.witness, ultra));

  std::vector<TargetSet> missing{TargetSet::one_of({q(0), q(5)})};
  auto none = ultrafilter_with_limits(ultra, id, missing);
  CHECK_FALSE(none.feasible);
  CHECK(none.certificate.a == SetElem{2, 3});
}

TEST_CASE("extend_assignment agrees with Fourier–Motzkin and the h scan") {
  std::mt19937_64 rng(37);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng() % 5;
    GroundSet g(n);
    PartialAssignment f{g, {{g.full(), q(1)}}};
    std::set<SetElem> used{g.full()};
    for (std::size_t k = 0, m = 1 + rng() % 3; k < m; ++k) {
      SetElem s;
      for (std::size_t x = 0; x < n; ++x) {
        if (rng() & 1u) s.set(x);
      }
      if (!used.insert(s).second) continue;
      f.pairs.emplace_back(s, q(static_cast<long>(rng() % 5), 4));
    }
    auto r = extend_assignment(f);
    auto algebra = generate_algebra(g, f.domain());
    FeasibilitySystem system(algebra.atom_count());
    for (const auto& [s, v] : f.pairs) {
      std::vector<Rational> row(algebra.atom_count(), Rational(0));
      for (auto i : algebra.atoms_inside(s)) row[i] = 1;
      system.add_equality(row, v);
    }
    CHECK(r.feasible == oracle::fm_feasible(system));
    if (r.feasible) {
      ++feasible;
      for (const auto& [s, v] : f.pairs) CHECK(r.witness->eval(s) == v);
      CHECK(oracle::scan_separation_condition(f, 2));
    } else {
      CHECK(refutes(f, r.certificate.h));
    }
  }
  CHECK(feasible > 20);
  CHECK(feasible < 280);
}

TEST_CASE("compatibility agrees with the direct order scan") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    GroundSet g(2 + rng() % 5);
    auto f0 = random_fam_on(rng, g, 4, q(1));
    auto f1 = random_fam_on(rng, g, 4, q(1));
    auto verdict = compatible(f0, f1);
    CHECK(verdict.compatible == oracle::scan_order_condition(f0, f1));
    CHECK(amalgamate(f0, f1).feasible == verdict.compatible);
    if (!verdict.compatible) {
      CHECK(verdict.certificate.a.subset_of(verdict.certificate.b));
      CHECK(f0.eval(verdict.certificate.a) > f1.eval(verdict.certificate.b));
    }
  }
}

TEST_CASE("three_way_extend agrees with an independent feasibility solve") {
  std::mt19937_64 rng(43);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 5;
    GroundSet g(n);
    auto f0 = random_fam_on(rng, g, 4, q(1));
    auto f1 = random_fam_on(rng, g, 4, q(1));
    std::vector<SetElem> gens;
    for (std::size_t k = 0, m = 1 + rng() % 2; k < m; ++k) {
      SetElem s;
      for (std::size_t x = 0; x < n; ++x) {
        if (rng() % 4 != 0) s.set(x);
      }
      gens.push_back(s);
    }
    SetElem core = g.full();
    for (const auto& s : gens) core &= s;
    if (core.empty()) continue;
    auto r = three_way_extend(f0, f1, gens);

    std::vector<SetElem> all = gens;
    for (const auto& a : f0.algebra().atoms()) all.push_back(a);
    for (const auto& a : f1.algebra().atoms()) all.push_back(a);
    auto algebra = generate_algebra(g, all);
    FeasibilitySystem system(algebra.atom_count());
    auto add = [&](const SetElem& s, const Rational& v) {
      std::vector<Rational> row(algebra.atom_count(), Rational(0));
      for (auto i : algebra.atoms_inside(s)) row[i] = 1;
      system.add_equality(row, v);
    };
    for (std::size_t i = 0; i < f0.algebra().atom_count(); ++i) add(f0.algebra().atoms()[i], f0.weight(i));
    for (std::size_t i = 0; i < f1.algebra().atom_count(); ++i) add(f1.algebra().atoms()[i], f1.weight(i));
    for (const auto& s : gens) add(s, q(1));
    CHECK(r.feasible == solve_feasibility(system).feasible);
    if (r.feasible) {
      ++feasible;
      CHECK(extends(*r.witness, f0));
      CHECK(extends(*r.witness, f1));
      for (const auto& s : gens) CHECK(r.witness->eval(s) == 1);
    }
  }
  CHECK(feasible > 0);
}

TEST_CASE("filter extensions are unique") {
  std::mt19937_64 rng(47);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng() % 5;
    GroundSet g(n);
    auto f0 = random_fam_on(rng, g, 4, q(1));
    SetElem gen;
    for (std::size_t x = 0; x < n; ++x) {
      if (rng() % 3 != 0) gen.set(x);
    }
    std::vector<SetElem> gens{gen};
    auto r = extend_with_filter(f0, gens);
    if (!r.feasible) continue;
    ++checked;
    PartialAssignment f{g, {}};
    std::map<SetElem, Rational> values{{g.full(), q(1)}};
    for (std::size_t i = 0; i < f0.algebra().atom_count(); ++i) values[f0.algebra().atoms()[i]] = f0.weight(i);
    values[gen] = 1;
    for (auto& [s, v] : values) f.pairs.emplace_back(s, v);
    for (std::uint64_t m = 0; m < r.witness->algebra().element_count(); ++m) {
      auto b = r.witness->algebra().element(m);
      auto bounds = extension_bounds(f, b);
      REQUIRE(bounds);
      CHECK(bounds->first == bounds->second);
      CHECK(bounds->first == r.witness->eval(b));
    }
  }
  CHECK(checked > 10);
}
