#include "famkit/box.hpp"

#include "famkit/rational.hpp"

#include <algorithm>

namespace famkit {

Box Box::make(std::span<const double> lo, std::span<const double> hi, bool closed) {
  if (lo.size() != hi.size() || lo.empty()) throw InputError("box corners must have the same positive dimension");
  if (lo.size() > kMaxBoxDim) throw CapacityError("box dimension exceeds the supported maximum");
  Box b;
  b.dim = lo.size();
  b.closed = closed;
  for (std::size_t i = 0; i < b.dim; ++i) {
    if (!(lo[i] <= hi[i])) throw InputError("box lower corner must not exceed the upper corner");
    b.lo[i] = lo[i];
    b.hi[i] = hi[i];
  }
  return b;
}

Box Box::unit(std::size_t dim) {
  std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
  return make(lo, hi);
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim; ++i) v *= width(i);
  return v;
}

bool Box::degenerate() const {
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(hi[i] > lo[i])) return true;
  }
  return false;
}

std::size_t Box::widest_axis() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dim; ++i) {
    if (width(i) > width(best)) best = i;
  }
  return best;
}

std::pair<Box, Box> Box::bisect(std::size_t axis) const {
  Box left = *this, right = *this;
  double mid = lo[axis] + 0.5 * width(axis);
  left.hi[axis] = mid;
  left.closed = false;
  right.lo[axis] = mid;
  return {left, right};
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < dim; ++i) {
    if (x[i] < lo[i]) return false;
    if (closed ? x[i] > hi[i] : x[i] >= hi[i]) return false;
  }
  return true;
}

double Box::overlap(const Box& other) const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    double w = std::min(hi[i], other.hi[i]) - std::max(lo[i], other.lo[i]);
    if (w <= 0) return 0.0;
    v *= w;
  }
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c(dim);
  for (std::size_t i = 0; i < dim; ++i) c[i] = lo[i] + 0.5 * width(i);
  return c;
}

BoxElem::BoxElem(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
  std::erase_if(boxes_, [](const Box& b) { return b.degenerate(); });
  for (const auto& b : boxes_) {
    if (b.dim != boxes_.front().dim) throw InputError("boxes of mixed dimension");
  }
  std::sort(boxes_.begin(), boxes_.end(), [](const Box& a, const Box& b) {
    return std::lexicographical_compare(a.lo.begin(), a.lo.begin() + a.dim, b.lo.begin(), b.lo.begin() + b.dim);
  });
  // Sweep along axis 0: only boxes still open at lo[0] can overlap.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    std::erase_if(active, [&](std::size_t j) { return boxes_[j].hi[0] <= boxes_[i].lo[0]; });
    for (auto j : active) {
      if (boxes_[i].overlap(boxes_[j]) > 0) throw InputError("boxes of a box union must be disjoint");
    }
    active.push_back(i);
  }
}

double BoxElem::volume() const {
  double v = 0.0;
  for (const auto& b : boxes_) v += b.volume();
  return v;
}

bool BoxElem::contains(std::span<const double> x) const {
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(x); });
}

}  // namespace famkit
