#include "famkit/darboux.hpp"

#include "famkit/rational.hpp"

#include <cmath>
#include <limits>

namespace famkit {

namespace {

constexpr unsigned kMaxCellBits = 40;

Box cylinder_cell(unsigned depth, std::uint64_t k) {
  Box b;
  b.dim = 1;
  double scale = std::ldexp(1.0, -static_cast<int>(depth));
  b.lo[0] = static_cast<double>(k) * scale;
  b.hi[0] = static_cast<double>(k + 1) * scale;
  b.closed = k + 1 == (std::uint64_t{1} << depth);
  return b;
}

template <class CellOf>
CellSums reduce_serial(const RangeOracle& f, std::uint64_t count, CellOf cell_of) {
  CellSums s;
  for (std::uint64_t i = 0; i < count; ++i) {
    Box b = cell_of(i);
    Range r = f.range(b);
    double v = b.volume();
    s.lower += r.lo * v;
    s.upper += r.hi * v;
    s.floor += r.hereditary_osc * v;
    s.magnitude += (std::abs(r.lo) + std::abs(r.hi)) * v;
  }
  s.cells = count;
  return s;
}

template <class CellOf>
CellSums reduce_parallel(const RangeOracle& f, std::uint64_t count, CellOf cell_of) {
  double lower = 0.0, upper = 0.0, floor = 0.0, magnitude = 0.0;
  auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) reduction(+ : lower, upper, floor, magnitude)
  for (std::int64_t i = 0; i < n; ++i) {
    Box b = cell_of(static_cast<std::uint64_t>(i));
    Range r = f.range(b);
    double v = b.volume();
    lower += r.lo * v;
    upper += r.hi * v;
    floor += r.hereditary_osc * v;
    magnitude += (std::abs(r.lo) + std::abs(r.hi)) * v;
  }
  return {lower, upper, floor, magnitude, count};
}

template <class CellOf>
CellSums reduce(const RangeOracle& f, std::uint64_t count, CellOf cell_of, Exec exec) {
  return exec == Exec::serial ? reduce_serial(f, count, cell_of) : reduce_parallel(f, count, cell_of);
}

}  // namespace

Box grid_cell(const Box& domain, unsigned level, std::uint64_t index) {
  Box b = domain;
  b.closed = false;
  std::uint64_t per_axis = std::uint64_t{1} << level;
  for (std::size_t a = 0; a < domain.dim; ++a) {
    std::uint64_t k = index % per_axis;
    index /= per_axis;
    double w = domain.width(a);
    // Dyadic fractions of the width are exact; the endpoints inherit the
    // domain's rounding only.
    b.lo[a] = domain.lo[a] + w * std::ldexp(static_cast<double>(k), -static_cast<int>(level));
    b.hi[a] = k + 1 == per_axis ? domain.hi[a]
                                : domain.lo[a] + w * std::ldexp(static_cast<double>(k + 1), -static_cast<int>(level));
  }
  return b;
}

CellSums grid_sums(const RangeOracle& f, const Box& domain, unsigned level, Exec exec) {
  if (f.dimension() != domain.dim) throw InputError("function and domain dimension mismatch");
  if (level * domain.dim > kMaxCellBits) throw CapacityError("grid too fine");
  std::uint64_t count = std::uint64_t{1} << (level * domain.dim);
  return reduce(f, count, [&](std::uint64_t i) { return grid_cell(domain, level, i); }, exec);
}

CellSums cylinder_sums(const RangeOracle& g, unsigned depth, Exec exec) {
  if (g.dimension() != 1) throw InputError("Cantor integrand must be a function on [0,1]");
  if (depth > kMaxCellBits) throw CapacityError("cylinder depth too large");
  std::uint64_t count = std::uint64_t{1} << depth;
  return reduce(g, count, [depth](std::uint64_t k) { return cylinder_cell(depth, k); }, exec);
}

double rounding_guard(double magnitude, std::uint64_t cells) {
  double n = static_cast<double>(cells) + 2.0;
  return 2.0 * n * std::numeric_limits<double>::epsilon() * magnitude + std::numeric_limits<double>::denorm_min();
}

}  // namespace famkit
