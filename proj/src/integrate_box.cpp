#include "famkit/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace famkit {

namespace {

struct Cell {
  Box box;
  Range range;
  double key = 0.0;
};

bool by_key(const Cell& a, const Cell& b) { return a.key < b.key; }

Cell make_cell(const RangeOracle& f, const Box& box) {
  Range r = f.range(box);
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw InputError("function is unbounded on the domain");
  if (r.lo > r.hi) throw DomainError("range oracle returned an empty enclosure");
  return {box, r, (r.hi - r.lo) * box.volume()};
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void validate(const RangeOracle& f, const Box& domain, double eps, std::size_t budget) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InputError("epsilon must be a positive number");
  if (budget == 0) throw InputError("budget must be positive");
  if (f.dimension() != domain.dim) throw InputError("function and domain dimension mismatch");
  if (domain.degenerate()) throw InputError("integration domain has zero volume");
}

// Fills the verdict fields from certified sums.
void conclude(IntegralReport& out, const CellSums& s, double eps) {
  double guard = rounding_guard(s.magnitude, s.cells);
  out.lower = s.lower - guard;
  out.upper = s.upper + guard;
  out.estimate = 0.5 * (s.lower + s.upper);
  out.gap_floor = std::max(0.0, s.floor - guard);
  out.cells = s.cells;
  if (out.gap_floor > 0) {
    out.status = Status::not_integrable;
  } else if (out.upper - out.lower < eps) {
    out.status = Status::integrable;
    out.value = out.estimate;
  } else {
    out.status = Status::undecided;
  }
}

CellSums sum_cells(const std::vector<Cell>& cells) {
  CellSums s;
  for (const auto& c : cells) {
    double v = c.box.volume();
    s.lower += c.range.lo * v;
    s.upper += c.range.hi * v;
    s.floor += c.range.hereditary_osc * v;
    s.magnitude += (std::abs(c.range.lo) + std::abs(c.range.hi)) * v;
  }
  s.cells = cells.size();
  return s;
}

IntegralReport integrate_adaptive(const RangeOracle& f, const Box& domain, const BoxOptions& opts) {
  IntegralReport out;
  std::vector<Cell> heap;
  heap.reserve(std::min<std::size_t>(opts.budget, std::size_t{1} << 16));
  heap.push_back(make_cell(f, domain));
  CellSums run = sum_cells(heap);
  for (;;) {
    bool checkpoint = is_power_of_two(heap.size());
    double guard = rounding_guard(run.magnitude, heap.size());
    bool maybe_done = run.upper - run.lower + 2 * guard < opts.eps || run.floor > guard;
    if (checkpoint || maybe_done || heap.size() >= opts.budget) {
      // Recount from scratch so incremental drift never reaches a verdict.
      run = sum_cells(heap);
      if (checkpoint) out.trace.push_back({heap.size(), run.lower, run.upper});
      conclude(out, run, opts.eps);
      if (out.status != Status::undecided || heap.size() >= opts.budget) break;
    }
    std::pop_heap(heap.begin(), heap.end(), by_key);
    Cell parent = heap.back();
    heap.pop_back();
    auto [left, right] = parent.box.bisect(parent.box.widest_axis());
    double pv = parent.box.volume();
    run.lower -= parent.range.lo * pv;
    run.upper -= parent.range.hi * pv;
    run.floor -= parent.range.hereditary_osc * pv;
    run.magnitude -= (std::abs(parent.range.lo) + std::abs(parent.range.hi)) * pv;
    for (const Box& child : {left, right}) {
      Cell c = make_cell(f, child);
      double v = child.volume();
      run.lower += c.range.lo * v;
      run.upper += c.range.hi * v;
      run.floor += c.range.hereditary_osc * v;
      run.magnitude += (std::abs(c.range.lo) + std::abs(c.range.hi)) * v;
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), by_key);
    }
  }
  if (out.trace.empty() || out.trace.back().cells != out.cells) out.trace.push_back({out.cells, run.lower, run.upper});
  return out;
}

IntegralReport integrate_uniform(const RangeOracle& f, const Box& domain, const BoxOptions& opts) {
  IntegralReport out;
  Box root = domain;
  root.closed = false;
  make_cell(f, root);
  for (unsigned level = 0;; ++level) {
    CellSums s = grid_sums(f, root, level, opts.exec);
    if (!std::isfinite(s.lower) || !std::isfinite(s.upper)) throw InputError("function is unbounded on the domain");
    out.trace.push_back({static_cast<std::size_t>(s.cells), s.lower, s.upper});
    conclude(out, s, opts.eps);
    if (out.status != Status::undecided) break;
    double next = std::ldexp(1.0, static_cast<int>((level + 1) * domain.dim));
    if (next > static_cast<double>(opts.budget)) break;
  }
  return out;
}

Placement classify_checked(const SetOracle& e, const Box& box) { return e.classify(box); }

}  // namespace

IntegralReport integrate(const RangeOracle& f, const Box& domain, const BoxOptions& opts) {
  validate(f, domain, opts.eps, opts.budget);
  Box root = domain;
  root.closed = false;
  return opts.strategy == Strategy::adaptive ? integrate_adaptive(f, root, opts) : integrate_uniform(f, root, opts);
}

IntegralReport integrate_over(OraclePtr f, SetPtr e, const Box& domain, const BoxOptions& opts) {
  MaskedOracle masked(std::move(f), std::move(e));
  return integrate(masked, domain, opts);
}

JordanReport is_jordan(const SetOracle& e, const Box& domain, const JordanOptions& opts) {
  if (!(opts.eps > 0) || !std::isfinite(opts.eps)) throw InputError("epsilon must be a positive number");
  if (opts.budget == 0) throw InputError("budget must be positive");
  if (e.dimension() != domain.dim) throw InputError("set and domain dimension mismatch");
  if (domain.degenerate()) throw InputError("measurement domain has zero volume");
  Box root = domain;
  root.closed = false;

  JordanReport out;
  std::vector<Box> inside_cells;
  auto by_volume = [](const Box& a, const Box& b) { return a.volume() < b.volume(); };
  std::vector<Box> boundary;
  std::size_t settled = 0;
  auto place = [&](const Box& b) {
    switch (classify_checked(e, b)) {
      case Placement::inside:
        out.inside += b.volume();
        ++settled;
        if (opts.keep_witness) inside_cells.push_back(b);
        break;
      case Placement::outside:
        ++settled;
        break;
      case Placement::mixed:
        out.mixed += b.volume();
        ++settled;
        break;
      case Placement::boundary:
        out.boundary += b.volume();
        boundary.push_back(b);
        std::push_heap(boundary.begin(), boundary.end(), by_volume);
        break;
    }
  };
  place(root);
  for (;;) {
    out.cells = settled + boundary.size();
    if (out.mixed > 0) {
      out.status = Status::not_integrable;
      break;
    }
    if (out.boundary < opts.eps) {
      out.status = Status::integrable;
      break;
    }
    if (out.cells >= opts.budget) break;
    std::pop_heap(boundary.begin(), boundary.end(), by_volume);
    Box b = boundary.back();
    boundary.pop_back();
    out.boundary -= b.volume();
    auto [left, right] = b.bisect(b.widest_axis());
    place(left);
    place(right);
  }
  // The running boundary volume only ever sees dyadic fractions of the
  // domain volume; recount it anyway.
  out.boundary = 0.0;
  for (const auto& b : boundary) out.boundary += b.volume();
  out.inner = {out.inside, out.inside + out.boundary};
  out.outer = {out.inside + out.mixed, out.inside + out.boundary + out.mixed};
  out.measure = 0.5 * (out.inner.first + out.inner.second);
  if (out.status == Status::integrable && opts.keep_witness) {
    std::vector<Box> outer_cells = inside_cells;
    outer_cells.insert(outer_cells.end(), boundary.begin(), boundary.end());
    out.witness.emplace(BoxElem(inside_cells), BoxElem(outer_cells));
  }
  return out;
}

BoxSimple integrate_simple(std::span<const SimpleFunctionOracle::Cell> cells, const Box& domain,
                           const JordanOptions& opts) {
  if (cells.empty()) throw InputError("simple function needs at least one cell");
  // Cells certified to share positive volume are rejected.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      JordanOptions probe{opts.eps, std::min<std::size_t>(opts.budget, 4096), false};
      auto both = is_jordan(IntersectionSet(cells[i].set, cells[j].set), domain, probe);
      if (both.inside > 0) throw InputError("simple-function cells overlap");
    }
  }
  // Group cells into level sets; the complement of their union is the zero level.
  std::map<double, SetPtr> levels;
  SetPtr all;
  for (const auto& c : cells) {
    auto& slot = levels[c.value];
    slot = slot ? std::make_shared<UnionSet>(slot, c.set) : c.set;
    all = all ? std::make_shared<UnionSet>(all, c.set) : c.set;
  }
  SetPtr rest = std::make_shared<ComplementSet>(all);
  auto& zero = levels[0.0];
  zero = zero ? std::make_shared<UnionSet>(zero, rest) : rest;

  BoxSimple out;
  bool all_jordan = true, some_not = false;
  double value = 0.0, spread = 0.0, magnitude = 0.0;
  for (const auto& [c, set] : levels) {
    auto j = is_jordan(*set, domain, opts);
    all_jordan = all_jordan && j.status == Status::integrable;
    some_not = some_not || j.status == Status::not_integrable;
    value += c * j.measure;
    spread += std::abs(c) * 0.5 * (j.inner.second - j.inner.first);
    magnitude += std::abs(c) * j.measure;
    out.report.cells += j.cells;
    out.level_sets.emplace_back(c, std::move(j));
  }
  double guard = rounding_guard(magnitude, out.report.cells);
  out.report.estimate = value;
  out.report.lower = value - spread - guard;
  out.report.upper = value + spread + guard;
  // Distinct values on the level sets: a non-Jordan level set forces a gap.
  if (some_not && levels.size() > 1) {
    out.report.status = Status::not_integrable;
  } else if (all_jordan) {
    out.report.status = Status::integrable;
    out.report.value = value;
  }
  out.report.trace.push_back({out.report.cells, out.report.lower, out.report.upper});
  return out;
}

}  // namespace famkit
