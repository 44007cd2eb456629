#include "famkit/cantor.hpp"

#include <doctest.h>

#include <cmath>

using namespace famkit;

namespace {

Rational q(long p, unsigned long d = 1) { return make_rational(p, d); }

PiecewiseConstantOracle step_at(double jump, double left, double right) {
  std::vector<double> a{0.0}, m{jump}, b{1.0};
  return PiecewiseConstantOracle(1, {{Box::make(a, m), left}, {Box::make(m, b, true), right}});
}

}  // namespace

TEST_CASE("clopen canonical form and measure") {
  CHECK(clopen_measure(CantorClopen::whole()) == 1);
  CHECK(clopen_measure(CantorClopen({"0"})) == q(1, 2));
  CantorClopen merged({"00", "01"});
  CHECK(merged.cylinders() == std::vector<std::string>{"0"});
  CHECK(clopen_measure(merged) == q(1, 2));
  CantorClopen absorbed({"0", "011", "10"});
  CHECK(absorbed.cylinders() == std::vector<std::string>{"0", "10"});
  CHECK(CantorClopen({"0", "10", "11"}) == CantorClopen::whole());
  CHECK(clopen_measure(CantorClopen({"010", "1"})) == q(5, 8));
  CHECK_THROWS_AS(CantorClopen({"02"}), InputError);
}

TEST_CASE("from_level merges siblings at every level") {
  auto c = CantorClopen::from_level(3, {0, 1, 2, 3, 5});
  CHECK(c.cylinders() == std::vector<std::string>{"0", "101"});
  CHECK(CantorClopen::from_level(2, {0, 1, 2, 3}) == CantorClopen::whole());
  CHECK(CantorClopen::from_level(3, {}).empty());
  for (unsigned d = 1; d <= 5; ++d) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (1u << std::min(d, 3u))); mask += 3) {
      std::vector<std::uint64_t> idx;
      std::vector<std::string> strs;
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << std::min(d, 3u)); ++k) {
        if ((mask >> k) & 1u) {
          idx.push_back(k);
          std::string s(std::min(d, 3u), '0');
          for (unsigned i = 0; i < s.size(); ++i) s[i] = (k >> (s.size() - 1 - i)) & 1u ? '1' : '0';
          strs.push_back(s);
        }
      }
      CHECK(CantorClopen::from_level(std::min(d, 3u), idx) == CantorClopen(strs));
    }
  }
}

TEST_CASE("iota2 images") {
  auto e = iota2_image("");
  CHECK(e.first == 0);
  CHECK(e.second == 1);
  auto one = iota2_image("1");
  CHECK(one.first == q(1, 2));
  CHECK(one.second == 1);
  auto zo = iota2_image("01");
  CHECK(zo.first == q(1, 4));
  CHECK(zo.second == q(1, 2));
  CHECK(iota2_box("11").closed);
  CHECK_FALSE(iota2_box("10").closed);
  // A single cylinder's image has exactly its measure as length.
  for (std::string s : {"", "0", "101", "1110", "0000001"}) {
    auto [a, b] = iota2_image(s);
    CHECK(b - a == cylinder_measure(s));
  }
}

TEST_CASE("cantor_integrate on fixtures") {
  auto c = constant_oracle(1, 3.0);
  auto rc = cantor_integrate(*c);
  CHECK(rc.status == Status::integrable);
  CHECK(*rc.value == doctest::Approx(3.0).epsilon(1e-12));

  auto id = PolynomialOracle::univariate({0, 1});
  auto r = cantor_integrate(id, {1e-4});
  CHECK(r.status == Status::integrable);
  CHECK(std::abs(*r.value - 0.5) <= 1e-4);
  auto box = integrate(id, Box::unit(1), {1e-4});
  CHECK(std::abs(*r.value - *box.value) <= 2e-4);

  auto d = dirichlet_oracle(1);
  auto rd = cantor_integrate(*d);
  CHECK(rd.status == Status::not_integrable);
  CHECK(rd.gap_floor >= 1 - 1e-9);
}

TEST_CASE("oscillation covers") {
  auto sq = PolynomialOracle::univariate({0, 0, 1});
  Rational prev = 2;
  for (unsigned d = 0; d <= 12; ++d) {
    auto c = oscillation_cover(sq, 0.01, d);
    CHECK(c.measure <= prev);
    CHECK(clopen_measure(c.cover) == c.measure);
    prev = c.measure;
  }
  CHECK(prev == 0);

  auto dir = dirichlet_oracle(1);
  for (unsigned d : {0u, 3u, 9u}) {
    auto c = oscillation_cover(*dir, 0.5, d);
    CHECK(c.measure == 1);
  }

  auto step = step_at(1.0 / 3.0, 0.0, 1.0);
  for (unsigned d = 2; d <= 10; ++d) {
    auto c = oscillation_cover(step, 0.5, d);
    Rational bound(1);
    mpq_div_2exp(bound.get_mpq_t(), bound.get_mpq_t(), d - 1);
    CHECK(c.measure <= bound);
  }
  // Measure is non-increasing in the threshold as well.
  CHECK(oscillation_cover(sq, 0.05, 5).measure <= oscillation_cover(sq, 0.01, 5).measure);
}

TEST_CASE("Lebesgue-Vitali verdicts") {
  auto sq = PolynomialOracle::univariate({0, 0, 1});
  auto a = lebesgue_vitali_check(sq, 1e-3, 20);
  CHECK(a.verdict == Status::integrable);
  CHECK(a.integral.status == Status::integrable);
  CHECK(a.profile.size() == 6);

  auto step = step_at(0.3, -1.0, 2.0);
  CHECK(lebesgue_vitali_check(step, 1e-3, 20).verdict == Status::integrable);

  auto dir = dirichlet_oracle(1);
  auto b = lebesgue_vitali_check(*dir, 1e-3, 20);
  CHECK(b.verdict == Status::not_integrable);
  CHECK(b.integral.status == Status::not_integrable);
}

TEST_CASE("convergent sequence space") {
  auto s = convergent_sequence_space(6);
  CHECK(s.fam.total() == 1);
  auto j = is_jordan(s.below_one, s.fam);
  CHECK_FALSE(j.jordan);
  CHECK(j.inner == 0);
  CHECK(j.outer == 1);
  // id only varies on the mass-carrying atom {tail, 1}, by 2^-(N+1); the gap
  // closes as the truncation grows while the bracket of below_one stays [0, 1].
  Rational prev_gap = 1;
  for (std::size_t n : {2u, 6u, 12u}) {
    auto t = convergent_sequence_space(n);
    auto r = integrate(t.id, t.fam);
    CHECK(r.upper == 1);
    Rational gap(1);
    mpq_div_2exp(gap.get_mpq_t(), gap.get_mpq_t(), n + 1);
    CHECK(r.upper - r.lower == gap);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    CHECK(outer_measure(t.below_one, t.fam) == 1);
    CHECK(inner_measure(t.below_one, t.fam) == 0);
  }
}
