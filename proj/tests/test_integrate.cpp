#include "famkit/integrate.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace famkit;

namespace {

Rational q(long p, unsigned long d = 1) { return make_rational(p, d); }

Fam random_fam(std::mt19937& rng, std::size_t n, std::size_t max_atoms) {
  std::uniform_int_distribution<std::size_t> pick(0, max_atoms - 1);
  std::vector<SetElem> cells(max_atoms);
  for (std::size_t x = 0; x < n; ++x) cells[x < max_atoms ? x : pick(rng)].set(x);
  std::vector<std::pair<SetElem, Rational>> pieces;
  std::uniform_int_distribution<long> w(0, 4);
  for (auto& c : cells) {
    if (!c.empty()) pieces.emplace_back(c, q(w(rng), 4));
  }
  return Fam::from_pieces(GroundSet(n), std::move(pieces));
}

ExactFn random_fn(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<long> v(-6, 6);
  ExactFn f(n);
  for (auto& x : f) x = q(v(rng), 2);
  return f;
}

// Atom-constant version of f: integrable on any fam over the same algebra.
ExactFn flatten(const ExactFn& f, const Fam& fam) {
  ExactFn g(f.size());
  for (const auto& a : fam.algebra().atoms()) {
    for (auto x : a.indices()) g[x] = f[a.first()];
  }
  return g;
}

// Every partition of the atoms, as lists of atom-index blocks.
void each_partition(std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> label(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == k) {
      visit(label);
      return;
    }
    for (std::size_t b = 0; b <= used && b < k; ++b) {
      label[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

Partition partition_from(const Fam& fam, const std::vector<std::size_t>& label) {
  std::vector<SetElem> cells(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) cells[label[i]] |= fam.algebra().atoms()[i];
  return Partition(fam.algebra(), cells);
}

PolynomialOracle poly2(std::vector<PolynomialOracle::Term> terms) { return PolynomialOracle(2, std::move(terms)); }

}  // namespace

TEST_CASE("finite sums: constants and indicators") {
  auto fam = Fam::from_pieces(GroundSet(4), {{{0, 1}, q(1, 3)}, {{2}, q(1, 2)}, {{3}, q(1, 6)}});
  ExactFn c(4, q(5, 2));
  auto unit = Partition::unit(fam.algebra());
  CHECK(supsum(c, unit, fam) == q(5, 2));
  CHECK(infsum(c, unit, fam) == q(5, 2));

  SetElem e{0, 1};
  ExactFn chi(4);
  chi[0] = chi[1] = 1;
  Partition split(fam.algebra(), {e, e.complement(4)});
  CHECK(supsum(chi, split, fam) == q(1, 3));
  CHECK(infsum(chi, split, fam) == q(1, 3));

  auto r = integrate(c, fam);
  CHECK(r.integrable);
  CHECK(*r.value == q(5, 2));
}

TEST_CASE("finite integrate: a function varying on a positive atom is not integrable") {
  auto fam = Fam::from_pieces(GroundSet(3), {{{0, 1}, q(1, 2)}, {{2}, q(1, 2)}});
  ExactFn f{q(0), q(1), q(3)};
  auto r = integrate(f, fam);
  CHECK_FALSE(r.integrable);
  CHECK(r.lower == q(3, 2));
  CHECK(r.upper == q(2));
  // The same variation on a null atom costs nothing.
  auto null_fam = Fam::from_pieces(GroundSet(3), {{{0, 1}, q(0)}, {{2}, q(1)}});
  CHECK(*integrate(f, null_fam).value == q(3));
}

TEST_CASE("integrate_over: whole set, empty set, Jordan-null set") {
  std::mt19937 rng(7);
  auto fam = Fam::from_pieces(GroundSet(5), {{{0, 1}, q(1, 2)}, {{2, 3}, q(1, 2)}, {{4}, q(0)}});
  auto f = flatten(random_fn(rng, 5), fam);
  CHECK(*integrate_over(f, fam.ground().full(), fam).value == *integrate(f, fam).value);
  CHECK(*integrate_over(f, SetElem{}, fam).value == 0);
  ExactFn wild = random_fn(rng, 5);
  auto on_null = integrate_over(wild, SetElem{4}, fam);
  CHECK(on_null.integrable);
  CHECK(*on_null.value == 0);
}

TEST_CASE("outer and inner measure, exact Jordan") {
  auto fam = Fam::from_pieces(GroundSet(4), {{{0, 1}, q(1, 3)}, {{2, 3}, q(2, 3)}});
  CHECK(outer_measure(SetElem{0, 1}, fam) == q(1, 3));
  CHECK(inner_measure(SetElem{0, 1}, fam) == q(1, 3));
  CHECK(outer_measure(SetElem{0, 2}, fam) == 1);
  CHECK(inner_measure(SetElem{0, 2}, fam) == 0);
  auto j = is_jordan(SetElem{0, 1}, fam);
  CHECK(j.jordan);
  CHECK(j.a == SetElem{0, 1});
  CHECK(j.b == SetElem{0, 1});
  CHECK_FALSE(is_jordan(SetElem{0}, fam).jordan);
}

TEST_CASE("integrate_simple on the finite backend") {
  auto fam = Fam::from_pieces(GroundSet(4), {{{0, 1}, q(1, 2)}, {{2, 3}, q(1, 2)}});
  std::vector<std::pair<SetElem, Rational>> one{{SetElem{0, 1}, q(3)}};
  auto s = integrate_simple(one, fam);
  CHECK(*s.integral.value == q(3, 2));

  std::vector<std::pair<SetElem, Rational>> cut{{SetElem{0}, q(1)}, {SetElem{1, 2, 3}, q(2)}};
  auto t = integrate_simple(cut, fam);
  CHECK_FALSE(t.integral.integrable);
  for (const auto& [c, j] : t.level_sets_jordan) CHECK_FALSE(j);

  std::vector<std::pair<SetElem, Rational>> overlap{{SetElem{0, 1}, q(1)}, {SetElem{1}, q(2)}};
  CHECK_THROWS_AS(integrate_simple(overlap, fam), InputError);
}

TEST_CASE("oscillation on principal ultrafilters") {
  auto fam = Fam::from_pieces(GroundSet(4), {{{0, 1}, q(1, 2)}, {{2, 3}, q(1, 2)}});
  std::size_t a01 = fam.algebra().atom_of(0);
  ExactFn c{q(2), q(2), q(5), q(7)};
  CHECK(oscillation(c, fam, a01) == 0);
  CHECK(*ultrafilter_integrate(c, fam, a01) == 2);
  ExactFn id{q(0), q(1), q(2), q(3)};
  CHECK(oscillation(id, fam, a01) == 1);
  CHECK_FALSE(ultrafilter_integrate(id, fam, a01).has_value());

  // Atom ↔ principal ultrafilter: ∫ f dΞ_{u_x} = f(x).
  auto power = Algebra::power_set(GroundSet(4));
  for (std::size_t x = 0; x < 4; ++x) {
    std::vector<SetElem> gen{SetElem{x}};
    auto ux = filter_fam(power, gen);
    CHECK(*integrate(id, ux).value == id[x]);
    CHECK(*ultrafilter_integrate(id, Fam::from_pieces(GroundSet(4), {{{0}, q(1)}, {{1}, q(1)}, {{2}, q(1)}, {{3}, q(1)}}), x) == id[x]);
  }
}

TEST_CASE("pushforward identity") {
  auto ground = GroundSet(10);
  auto fam = uniform_fam(ground, ground.full());
  std::vector<std::size_t> h(10, 1);
  h[0] = 0;
  GroundSet y(3);
  ExactFn chi0{q(1), q(0), q(0)};
  auto r = pushforward_integral_check(chi0, h, y, fam);
  CHECK(r.equal);
  CHECK(*r.lhs.value == q(1, 10));
  CHECK(*r.rhs.value == q(1, 10));
  CHECK_FALSE(r.injective);

  std::vector<std::size_t> id(10);
  for (std::size_t i = 0; i < 10; ++i) id[i] = i;
  ExactFn f(10);
  for (std::size_t i = 0; i < 10; ++i) f[i] = q(static_cast<long>(i * i));
  auto s = pushforward_integral_check(f, id, ground, fam);
  CHECK(s.equal);
  CHECK(s.injective);
  CHECK(*s.same_integrability);

  ExactFn c(3, q(4));
  CHECK(*pushforward_integral_check(c, h, y, fam).lhs.value == 4);
}

TEST_CASE("xi-star convergence reports") {
  std::mt19937 rng(3);
  auto fam = random_fam(rng, 5, 3);
  auto f = random_fn(rng, 5);
  std::vector<Rational> grid{q(1, 2), q(1, 8)};

  std::vector<ExactFn> same(6, f);
  auto r = xi_star_converges(same, f, fam, grid);
  CHECK(r.converges);
  for (const auto& row : r.rows)
    for (const auto& v : row.outer) CHECK(v == 0);

  std::vector<ExactFn> shrink;
  for (long n = 1; n <= 12; ++n) {
    ExactFn g = f;
    for (auto& v : g) v += q(1, n);
    shrink.push_back(g);
  }
  auto s = xi_star_converges(shrink, f, fam, grid);
  CHECK(s.converges);
  // 1/n < 1/8 once n > 8.
  CHECK(s.rows[1].outer[7] == fam.total());
  CHECK(s.rows[1].outer[8] == 0);
  CHECK(*s.rows[1].settled_at == 8);

  std::vector<ExactFn> stuck(6, f);
  for (auto& g : stuck) g[0] += 1;
  auto bad = Fam::from_pieces(GroundSet(5), {{{0}, q(1)}, {{1, 2, 3, 4}, q(0)}});
  CHECK_FALSE(xi_star_converges(stuck, f, bad, grid).converges);
}

TEST_CASE("simple approximations along a refinement chain converge") {
  // f_n = value of f at the first point of its cell in the n-th partition of
  // a chain ending at the atoms; deviation sets shrink to nothing.
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto fam = random_fam(rng, 6, 6);
    auto f = flatten(random_fn(rng, 6), fam);
    const auto& atoms = fam.algebra().atoms();
    std::vector<ExactFn> seq;
    for (std::size_t n = 1; n <= atoms.size(); ++n) {
      ExactFn g(6);
      SetElem tail;
      for (std::size_t i = n - 1; i < atoms.size(); ++i) tail |= atoms[i];
      for (std::size_t i = 0; i + 1 < n; ++i)
        for (auto x : atoms[i].indices()) g[x] = f[x];
      for (auto x : tail.indices()) g[x] = f[tail.first()];
      seq.push_back(g);
    }
    std::vector<Rational> grid{q(1, 4)};
    auto r = xi_star_converges(seq, f, fam, grid);
    CHECK(r.converges);
    CHECK(*integrate(seq.back(), fam).value == *integrate(f, fam).value);
  }
}

TEST_CASE("refinement monotonicity, exhaustive up to five atoms") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    auto fam = random_fam(rng, 6, 5);
    auto f = random_fn(rng, 6);
    std::size_t k = fam.algebra().atom_count();
    std::vector<Partition> all;
    each_partition(k, [&](const std::vector<std::size_t>& l) { all.push_back(partition_from(fam, l)); });
    for (const auto& p : all) {
      auto sp = supsum(f, p, fam), ip = infsum(f, p, fam);
      CHECK(ip <= sp);
      for (const auto& qq : all) {
        if (!is_refinement(qq, p)) continue;
        CHECK(infsum(f, qq, fam) >= ip);
        CHECK(supsum(f, qq, fam) <= sp);
      }
    }
  }
}

TEST_CASE("finite integral algebra laws") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    auto fam = random_fam(rng, 6, 4);
    auto f = flatten(random_fn(rng, 6), fam);
    auto g = flatten(random_fn(rng, 6), fam);
    Rational c = q(static_cast<long>(rng() % 7) - 3, 2);
    ExactFn lin(6), absf(6), prod(6);
    for (std::size_t x = 0; x < 6; ++x) {
      lin[x] = c * f[x] + g[x];
      absf[x] = abs(f[x]);
      prod[x] = f[x] * g[x];
    }
    auto I = [&](const ExactFn& h) { return *integrate(h, fam).value; };
    CHECK(I(lin) == c * I(f) + I(g));
    CHECK(abs(I(f)) <= I(absf));
    CHECK(integrate(prod, fam).integrable);
    ExactFn mx(6);
    for (std::size_t x = 0; x < 6; ++x) mx[x] = std::max(f[x], g[x]);
    CHECK(I(mx) >= I(f));

    // Disjoint additivity over algebra elements.
    auto mask = rng() % (std::uint64_t{1} << fam.algebra().atom_count());
    SetElem e1 = fam.algebra().element(mask);
    SetElem e2 = e1.complement(6);
    CHECK(*integrate_over(f, e1, fam).value + *integrate_over(f, e2, fam).value == I(f));

    // The Jordan completion integrates every function identically.
    auto wild = random_fn(rng, 6);
    auto a = integrate(wild, fam), b = integrate(wild, jordan_completion(fam));
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
  }
}

TEST_CASE("box sums: f(x) = x on two halves") {
  auto f = PolynomialOracle::univariate({0, 1});
  auto s = grid_sums(f, Box::unit(1), 1, Exec::serial);
  CHECK(s.upper == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(s.lower == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("box integrate: constants close at one cell") {
  auto c = constant_oracle(2, 2.5);
  auto r = integrate(*c, Box::unit(2), {});
  CHECK(r.status == Status::integrable);
  CHECK(r.cells == 1);
  CHECK(*r.value == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("box integrate: x^2 on [0,1] both strategies") {
  auto f = PolynomialOracle::univariate({0, 0, 1});
  for (auto strategy : {Strategy::adaptive, Strategy::uniform}) {
    BoxOptions opts;
    opts.strategy = strategy;
    auto r = integrate(f, Box::unit(1), opts);
    CHECK(r.status == Status::integrable);
    CHECK(r.upper - r.lower < 1e-6);
    CHECK(r.lower <= 1.0 / 3.0);
    CHECK(r.upper >= 1.0 / 3.0);
    CHECK(std::abs(*r.value - 1.0 / 3.0) < 1e-6);
    CHECK(r.trace.size() > 2);
  }
}

TEST_CASE("box integrate: Dirichlet is certified not integrable") {
  auto d = dirichlet_oracle(1);
  auto r = integrate(*d, Box::unit(1), {});
  CHECK(r.status == Status::not_integrable);
  CHECK(r.lower <= 1e-12);
  CHECK(r.upper >= 1 - 1e-12);
  CHECK(r.gap_floor >= 1 - 1e-9);
}

TEST_CASE("box integrate: exhausting the budget leaves the verdict open") {
  auto f = poly2({{1.0, {1, 0}}, {1.0, {0, 1}}});
  BoxOptions opts;
  opts.budget = 1 << 12;
  auto r = integrate(f, Box::unit(2), opts);
  CHECK(r.status == Status::undecided);
  CHECK_FALSE(r.value.has_value());
  CHECK(r.lower <= 1.0);
  CHECK(r.upper >= 1.0);
  CHECK(r.estimate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("box integrate rejects bad input") {
  auto f = PolynomialOracle::univariate({1});
  BoxOptions opts;
  opts.eps = 0;
  CHECK_THROWS_AS(integrate(f, Box::unit(1), opts), InputError);
  CHECK_THROWS_AS(integrate(f, Box::unit(2), {}), InputError);
  LipschitzOracle blowup(1, [](std::span<const double> x) { return 1.0 / x[0]; }, INFINITY);
  CHECK_THROWS_AS(integrate(blowup, Box::unit(1), {}), InputError);
}

TEST_CASE("serial and parallel kernels agree") {
  auto f = poly2({{1.0, {2, 1}}, {-0.5, {0, 3}}, {0.25, {}}});
  for (unsigned level = 0; level <= 7; ++level) {
    auto a = grid_sums(f, Box::unit(2), level, Exec::serial);
    auto b = grid_sums(f, Box::unit(2), level, Exec::parallel);
    double guard = rounding_guard(a.magnitude, a.cells);
    CHECK(std::abs(a.lower - b.lower) <= 2 * guard);
    CHECK(std::abs(a.upper - b.upper) <= 2 * guard);
    CHECK(a.cells == b.cells);
  }
  auto g = PolynomialOracle::univariate({0.1, -1, 3});
  for (unsigned depth = 0; depth <= 14; ++depth) {
    auto a = cylinder_sums(g, depth, Exec::serial);
    auto b = cylinder_sums(g, depth, Exec::parallel);
    double guard = rounding_guard(a.magnitude, a.cells);
    CHECK(std::abs(a.lower - b.lower) <= 2 * guard);
    CHECK(std::abs(a.upper - b.upper) <= 2 * guard);
  }
}

TEST_CASE("integrate_over on the box backend") {
  auto f = std::make_shared<PolynomialOracle>(PolynomialOracle::univariate({0, 1}));
  auto whole = std::make_shared<BoxUnionSet>(BoxElem({Box::unit(1)}));
  auto a = integrate_over(f, whole, Box::unit(1), {1e-4});
  auto b = integrate(*f, Box::unit(1), {1e-4});
  CHECK(*a.value == doctest::Approx(*b.value).epsilon(1e-12));

  auto none = std::make_shared<ComplementSet>(whole);
  auto z = integrate_over(f, none, Box::unit(1), {1e-4});
  CHECK(z.status == Status::integrable);
  CHECK(*z.value == doctest::Approx(0.0).scale(1));

  auto point = std::make_shared<PointSet>(std::vector<double>{0.3});
  auto p = integrate_over(f, point, Box::unit(1), {1e-4});
  CHECK(p.status == Status::integrable);
  CHECK(std::abs(*p.value) < 1e-4);
}

TEST_CASE("box Jordan: triangle, rationals, point, box union") {
  auto tri = std::make_shared<SublevelSet>(poly2({{1.0, {0, 1}}, {-1.0, {1, 0}}}));
  JordanOptions opts;
  opts.keep_witness = true;
  auto t = is_jordan(*tri, Box::unit(2), opts);
  CHECK(t.status == Status::integrable);
  CHECK(std::abs(t.measure - 0.5) < 1e-4);
  REQUIRE(t.witness.has_value());
  CHECK(t.witness->second.volume() - t.witness->first.volume() < 1e-4);

  RationalPointsSet rationals(1);
  auto r = is_jordan(rationals, Box::unit(1), {});
  CHECK(r.status == Status::not_integrable);
  CHECK(r.inner.second == 0.0);
  CHECK(r.outer.first == 1.0);

  PointSet pt({0.25});
  auto p = is_jordan(pt, Box::unit(1), {});
  CHECK(p.status == Status::integrable);
  CHECK(p.outer.second < 1e-4);
  CHECK(p.inner.first == 0.0);

  std::vector<double> lo{0.0, 0.0}, hi{0.5, 0.25};
  BoxUnionSet quarter(BoxElem({Box::make(lo, hi)}));
  auto u = is_jordan(quarter, Box::unit(2), {});
  CHECK(u.status == Status::integrable);
  CHECK(u.measure == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("box integrate_simple: tiling triangles and a non-Jordan cell") {
  auto lower = std::make_shared<SublevelSet>(poly2({{1.0, {0, 1}}, {-1.0, {1, 0}}}));
  SetPtr upper = std::make_shared<ComplementSet>(lower);
  std::vector<SimpleFunctionOracle::Cell> cells{{lower, 1.0}, {upper, 2.0}};
  auto s = integrate_simple(cells, Box::unit(2), {});
  CHECK(s.report.status == Status::integrable);
  CHECK(std::abs(*s.report.value - 1.5) < 2e-4);

  SimpleFunctionOracle as_fn(cells);
  auto direct = integrate(as_fn, Box::unit(2), {1e-3});
  CHECK(direct.status == Status::integrable);
  CHECK(std::abs(*direct.value - *s.report.value) < 2e-3);

  SetPtr q1 = std::make_shared<RationalPointsSet>(1);
  std::vector<SimpleFunctionOracle::Cell> dirichlet{{q1, 1.0}};
  auto d = integrate_simple(dirichlet, Box::unit(1), {});
  CHECK(d.report.status == Status::not_integrable);
}

TEST_CASE("box linearity within 2 eps") {
  auto f = PolynomialOracle::univariate({0, 1, -2, 1});
  auto g = PolynomialOracle::univariate({1, 0, 3});
  auto h = PolynomialOracle::univariate({1, 1, 1, 1});
  BoxOptions opts{1e-4};
  double a = *integrate(f, Box::unit(1), opts).value;
  double b = *integrate(g, Box::unit(1), opts).value;
  double c = *integrate(h, Box::unit(1), opts).value;
  CHECK(std::abs(c - (a + b)) <= 2 * opts.eps);
}
