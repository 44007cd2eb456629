#pragma once

#include "famkit/box.hpp"
#include "famkit/range_oracle.hpp"

#include <cstdint>

namespace famkit {

enum class Exec { serial, parallel };

/// Darboux sums over a family of cells, each weighted by its volume.
struct CellSums {
  double lower = 0.0;
  double upper = 0.0;
  /// Σ hereditary oscillation · volume, a certified lower bound on the gap
  /// between the upper and lower integrals.
  double floor = 0.0;
  /// Σ (|lo| + |hi|) · volume, used to size the rounding guard.
  double magnitude = 0.0;
  std::uint64_t cells = 0;
};

/// Cell `index` of the dyadic grid with 2^level cells per axis. Row-major
/// with axis 0 varying fastest.
Box grid_cell(const Box& domain, unsigned level, std::uint64_t index);

/// Sums over the dyadic grid of `domain` at `level`.
CellSums grid_sums(const RangeOracle& f, const Box& domain, unsigned level, Exec exec = Exec::parallel);

/// Sums over the 2^depth cylinders of Cantor space, each read on [0,1] through
/// its binary image [k/2^d, (k+1)/2^d). The last cell is closed at 1.
CellSums cylinder_sums(const RangeOracle& g, unsigned depth, Exec exec = Exec::parallel);

/// Rounding allowance for sums of `cells` terms whose absolute values total `magnitude`.
double rounding_guard(double magnitude, std::uint64_t cells);

}  // namespace famkit
