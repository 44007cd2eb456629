#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace famkit {

inline constexpr std::size_t kMaxBoxDim = 6;

/// Half-open box [lo, hi) in ℝⁿ. With `closed` set the upper faces belong
/// to the box too. Endpoints produced by bisection of dyadic boxes stay exact.
struct Box {
  std::size_t dim = 0;
  std::array<double, kMaxBoxDim> lo{};
  std::array<double, kMaxBoxDim> hi{};
  bool closed = false;

  static Box make(std::span<const double> lo, std::span<const double> hi, bool closed = false);
  static Box unit(std::size_t dim);

  double width(std::size_t axis) const { return hi[axis] - lo[axis]; }
  double volume() const;
  bool degenerate() const;
  /// Widest axis; ties go to the lowest index.
  std::size_t widest_axis() const;
  std::pair<Box, Box> bisect(std::size_t axis) const;
  bool contains(std::span<const double> x) const;
  /// Volume of the intersection with another box.
  double overlap(const Box& other) const;
  std::vector<double> center() const;
};

/// Finite union of pairwise disjoint half-open boxes, sorted by lower corner.
class BoxElem {
 public:
  BoxElem() = default;
  /// Throws InputError when two boxes overlap in positive volume.
  explicit BoxElem(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  double volume() const;
  bool contains(std::span<const double> x) const;

 private:
  std::vector<Box> boxes_;
};

}  // namespace famkit
