#include "famkit/lp.hpp"

#include <algorithm>
#include <limits>

namespace famkit {

void FeasibilitySystem::add_equality(std::vector<Rational> coeffs, Rational rhs, std::string label) {
  if (coeffs.size() != variables) throw InputError("equality row has the wrong number of coefficients");
  equalities.push_back({std::move(coeffs), std::move(rhs), std::move(label)});
}

void FeasibilitySystem::add_range(std::vector<Rational> coeffs, Rational lower, Rational upper, std::string label) {
  if (coeffs.size() != variables) throw InputError("range row has the wrong number of coefficients");
  if (lower > upper) throw InputError("range row has lower bound above upper bound");
  ranges.push_back({std::move(coeffs), std::move(lower), std::move(upper), std::move(label)});
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense tableau in standard form A x = b, x >= 0, b >= 0. Column layout:
// [structural | range slacks | artificials | rhs]. One artificial per row.
class Tableau {
 public:
  explicit Tableau(const FeasibilitySystem& sys) : structural_(sys.variables) {
    rows_ = sys.equalities.size() + 2 * sys.ranges.size();
    slacks_ = 2 * sys.ranges.size();
    cols_ = structural_ + slacks_ + rows_;
    cells_.assign(rows_, std::vector<Rational>(cols_ + 1));
    sign_.assign(rows_, 1);
    kind_.assign(rows_, RowKind::equality);
    source_.assign(rows_, 0);

    std::size_t r = 0;
    for (std::size_t e = 0; e < sys.equalities.size(); ++e, ++r) {
      const auto& eq = sys.equalities[e];
      for (std::size_t j = 0; j < structural_; ++j) cells_[r][j] = eq.coeffs[j];
      cells_[r][cols_] = eq.rhs;
      source_[r] = e;
    }
    for (std::size_t k = 0; k < sys.ranges.size(); ++k) {
      const auto& rg = sys.ranges[k];
      for (std::size_t j = 0; j < structural_; ++j) cells_[r][j] = rg.coeffs[j];
      cells_[r][structural_ + 2 * k] = -1;
      cells_[r][cols_] = rg.lower;
      kind_[r] = RowKind::range_lower;
      source_[r] = k;
      ++r;
      for (std::size_t j = 0; j < structural_; ++j) cells_[r][j] = rg.coeffs[j];
      cells_[r][structural_ + 2 * k + 1] = 1;
      cells_[r][cols_] = rg.upper;
      kind_[r] = RowKind::range_upper;
      source_[r] = k;
      ++r;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (cells_[i][cols_] < 0) {
        sign_[i] = -1;
        for (auto& v : cells_[i]) v = -v;
      }
      cells_[i][artificial(i)] = 1;
    }
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) basis_[i] = artificial(i);
    active_.assign(rows_, true);
  }

  enum class RowKind { equality, range_lower, range_upper };

  std::size_t artificial(std::size_t row) const { return structural_ + slacks_ + row; }
  bool is_artificial(std::size_t col) const { return col >= structural_ + slacks_ && col < cols_; }

  // Phase 1: minimise the sum of artificials. Returns the optimal value.
  Rational phase_one() {
    std::vector<Rational> cost(cols_);
    for (std::size_t i = 0; i < rows_; ++i) cost[artificial(i)] = 1;
    run(cost, /*allow_artificial=*/true);
    return objective_value(cost);
  }

  // Dual prices of the standardized rows under the phase-1 costs.
  std::vector<Rational> phase_one_duals() const {
    std::vector<Rational> cost(cols_);
    for (std::size_t i = 0; i < rows_; ++i) cost[artificial(i)] = 1;
    auto reduced = reduced_costs(cost);
    std::vector<Rational> pi(rows_);
    for (std::size_t i = 0; i < rows_; ++i) pi[i] = cost[artificial(i)] - reduced[artificial(i)];
    return pi;
  }

  // Pivots zero-level artificials out of the basis and deactivates redundant rows.
  void purge_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r] || !is_artificial(basis_[r])) continue;
      std::size_t col = kNone;
      for (std::size_t j = 0; j < structural_ + slacks_; ++j) {
        if (cells_[r][j] != 0) {
          col = j;
          break;
        }
      }
      if (col == kNone) {
        active_[r] = false;
      } else {
        pivot(r, col);
      }
    }
  }

  // Phase 2 on the structural objective (minimisation). False when unbounded.
  bool phase_two(const std::vector<Rational>& objective) {
    std::vector<Rational> cost(cols_);
    for (std::size_t j = 0; j < structural_; ++j) cost[j] = objective[j];
    return run(cost, /*allow_artificial=*/false);
  }

  std::vector<Rational> structural_point() const {
    std::vector<Rational> x(structural_);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (active_[r] && basis_[r] < structural_) x[basis_[r]] = cells_[r][cols_];
    }
    return x;
  }

  int sign(std::size_t r) const { return sign_[r]; }
  RowKind kind(std::size_t r) const { return kind_[r]; }
  std::size_t source(std::size_t r) const { return source_[r]; }
  std::size_t rows() const { return rows_; }

 private:
  std::vector<Rational> reduced_costs(const std::vector<Rational>& cost) const {
    std::vector<Rational> reduced = cost;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r]) continue;
      const auto& cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (cells_[r][j] != 0) reduced[j] -= cb * cells_[r][j];
      }
    }
    return reduced;
  }

  Rational objective_value(const std::vector<Rational>& cost) const {
    Rational z = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (active_[r]) z += cost[basis_[r]] * cells_[r][cols_];
    }
    return z;
  }

  bool run(const std::vector<Rational>& cost, bool allow_artificial) {
    for (;;) {
      auto reduced = reduced_costs(cost);
      std::size_t entering = kNone;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (reduced[j] < 0) {
          entering = j;
          break;
        }
      }
      if (entering == kNone) return true;

      std::size_t leaving = kNone;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!active_[r] || cells_[r][entering] <= 0) continue;
        Rational ratio = cells_[r][cols_] / cells_[r][entering];
        if (leaving == kNone || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (leaving == kNone) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rational p = cells_[row][col];
    for (auto& v : cells_[row]) v /= p;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row || !active_[r]) continue;
      Rational factor = cells_[r][col];
      if (factor == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (cells_[row][j] != 0) cells_[r][j] -= factor * cells_[row][j];
      }
    }
    basis_[row] = col;
  }

  std::size_t structural_ = 0;
  std::size_t slacks_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Rational>> cells_;
  std::vector<int> sign_;
  std::vector<RowKind> kind_;
  std::vector<std::size_t> source_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

FeasibilityOutcome solve_feasibility(const FeasibilitySystem& system) {
  Tableau t(system);
  FeasibilityOutcome out;
  if (t.phase_one() == 0) {
    out.feasible = true;
    out.point = t.structural_point();
    return out;
  }
  auto pi = t.phase_one_duals();
  out.equality_multipliers.assign(system.equalities.size(), Rational(0));
  out.lower_multipliers.assign(system.ranges.size(), Rational(0));
  out.upper_multipliers.assign(system.ranges.size(), Rational(0));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    Rational y = pi[r] * t.sign(r);
    switch (t.kind(r)) {
      case Tableau::RowKind::equality: out.equality_multipliers[t.source(r)] = y; break;
      case Tableau::RowKind::range_lower: out.lower_multipliers[t.source(r)] = y; break;
      case Tableau::RowKind::range_upper: out.upper_multipliers[t.source(r)] = -y; break;
    }
  }
  return out;
}

OptimumOutcome minimize(const FeasibilitySystem& system, const std::vector<Rational>& objective) {
  if (objective.size() != system.variables) throw InputError("objective has the wrong number of coefficients");
  Tableau t(system);
  OptimumOutcome out;
  if (t.phase_one() != 0) return out;
  t.purge_artificials();
  if (!t.phase_two(objective)) {
    out.status = OptimumStatus::unbounded;
    return out;
  }
  out.status = OptimumStatus::optimal;
  out.point = t.structural_point();
  out.value = dot(objective, out.point);
  return out;
}

OptimumOutcome maximize(const FeasibilitySystem& system, const std::vector<Rational>& objective) {
  std::vector<Rational> negated(objective.size());
  for (std::size_t i = 0; i < objective.size(); ++i) negated[i] = -objective[i];
  auto out = minimize(system, negated);
  if (out.status == OptimumStatus::optimal) out.value = -out.value;
  return out;
}

bool satisfies(const FeasibilitySystem& system, const std::vector<Rational>& point) {
  if (point.size() != system.variables) return false;
  for (const auto& v : point) {
    if (v < 0) return false;
  }
  for (const auto& eq : system.equalities) {
    if (dot(eq.coeffs, point) != eq.rhs) return false;
  }
  for (const auto& rg : system.ranges) {
    auto v = dot(rg.coeffs, point);
    if (v < rg.lower || v > rg.upper) return false;
  }
  return true;
}

bool certifies_infeasibility(const FeasibilitySystem& system, const FeasibilityOutcome& outcome) {
  if (outcome.feasible) return false;
  if (outcome.equality_multipliers.size() != system.equalities.size() ||
      outcome.lower_multipliers.size() != system.ranges.size() ||
      outcome.upper_multipliers.size() != system.ranges.size()) {
    return false;
  }
  std::vector<Rational> g(system.variables);
  Rational beta = 0;
  for (std::size_t e = 0; e < system.equalities.size(); ++e) {
    const auto& y = outcome.equality_multipliers[e];
    for (std::size_t j = 0; j < system.variables; ++j) g[j] += y * system.equalities[e].coeffs[j];
    beta += y * system.equalities[e].rhs;
  }
  for (std::size_t k = 0; k < system.ranges.size(); ++k) {
    const auto& lam = outcome.lower_multipliers[k];
    const auto& mu = outcome.upper_multipliers[k];
    if (lam < 0 || mu < 0) return false;
    for (std::size_t j = 0; j < system.variables; ++j) g[j] += (lam - mu) * system.ranges[k].coeffs[j];
    beta += lam * system.ranges[k].lower - mu * system.ranges[k].upper;
  }
  return std::all_of(g.begin(), g.end(), [](const Rational& v) { return v <= 0; }) && beta > 0;
}

}  // namespace famkit
