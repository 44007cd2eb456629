#include "oracle/oracle.hpp"

#include <algorithm>
#include <set>

namespace famkit::oracle {

namespace {

// Σ coeffs·w <= rhs.
struct Row {
  std::vector<Rational> coeffs;
  Rational rhs;
  bool operator<(const Row& o) const {
    if (coeffs != o.coeffs) return std::lexicographical_compare(coeffs.begin(), coeffs.end(), o.coeffs.begin(), o.coeffs.end());
    return rhs < o.rhs;
  }
};

// Divide by the largest absolute coefficient so duplicates collapse.
Row normalized(Row r) {
  Rational scale = 0;
  for (const auto& c : r.coeffs) scale = std::max(scale, Rational(abs(c)));
  if (scale == 0) return r;
  for (auto& c : r.coeffs) c /= scale;
  r.rhs /= scale;
  return r;
}

}  // namespace

bool fm_feasible(const FeasibilitySystem& system) {
  const std::size_t n = system.variables;
  if (n > 12) throw CapacityError("Fourier–Motzkin oracle is limited to 12 variables");
  std::set<Row> rows;
  auto add = [&](std::vector<Rational> c, Rational b) { rows.insert(normalized(Row{std::move(c), std::move(b)})); };
  auto negate = [](std::vector<Rational> c) {
    for (auto& x : c) x = -x;
    return c;
  };
  for (const auto& e : system.equalities) {
    add(e.coeffs, e.rhs);
    add(negate(e.coeffs), -e.rhs);
  }
  for (const auto& r : system.ranges) {
    add(r.coeffs, r.upper);
    add(negate(r.coeffs), -r.lower);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> c(n, Rational(0));
    c[j] = -1;
    add(std::move(c), Rational(0));
  }

  for (std::size_t j = n; j-- > 0;) {
    std::vector<Row> pos, neg;
    std::set<Row> next;
    for (const auto& r : rows) {
      if (r.coeffs[j] > 0) {
        pos.push_back(r);
      } else if (r.coeffs[j] < 0) {
        neg.push_back(r);
      } else {
        next.insert(r);
      }
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        Rational sp = -q.coeffs[j];
        Rational sq = p.coeffs[j];
        Row combined{std::vector<Rational>(n), sp * p.rhs + sq * q.rhs};
        for (std::size_t k = 0; k < n; ++k) combined.coeffs[k] = sp * p.coeffs[k] + sq * q.coeffs[k];
        combined.coeffs[j] = 0;
        next.insert(normalized(std::move(combined)));
      }
    }
    rows = std::move(next);
  }
  for (const auto& r : rows) {
    if (r.rhs < 0) return false;
  }
  return true;
}

}  // namespace famkit::oracle
