#include "famkit/range_oracle.hpp"

#include "famkit/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace famkit {

namespace {

struct Interval {
  double lo, hi;
};

Interval ipow(Interval x, unsigned e) {
  if (e == 0) return {1.0, 1.0};
  double a = std::pow(x.lo, e), b = std::pow(x.hi, e);
  if (e % 2 == 1 || x.lo >= 0) return {std::min(a, b), std::max(a, b)};
  if (x.hi <= 0) return {std::min(a, b), std::max(a, b)};
  return {0.0, std::max(a, b)};
}

Interval imul(Interval x, Interval y) {
  double p[] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

// Outward widening that absorbs the rounding of a short interval computation.
Interval widen(Interval x, double magnitude) {
  double pad = 8 * std::numeric_limits<double>::epsilon() * magnitude + std::numeric_limits<double>::denorm_min();
  return {x.lo - pad, x.hi + pad};
}

Placement combine_union(Placement a, Placement b) {
  if (a == Placement::inside || b == Placement::inside) return Placement::inside;
  if (a == Placement::outside) return b;
  if (b == Placement::outside) return a;
  return Placement::boundary;
}

Placement flip(Placement p) {
  if (p == Placement::inside) return Placement::outside;
  if (p == Placement::outside) return Placement::inside;
  return p;
}

}  // namespace

PolynomialOracle::PolynomialOracle(std::size_t dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim == 0 || dim > kMaxBoxDim) throw InputError("polynomial dimension out of range");
  for (auto& t : terms_) {
    if (t.exps.size() > dim) throw InputError("polynomial term has too many exponents");
    t.exps.resize(dim, 0);
  }
}

PolynomialOracle PolynomialOracle::univariate(std::vector<double> coefficients) {
  std::vector<Term> terms;
  for (unsigned k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] != 0.0) terms.push_back({coefficients[k], {k}});
  }
  return PolynomialOracle(1, std::move(terms));
}

Range PolynomialOracle::range(const Box& box) const {
  Interval sum{0.0, 0.0};
  double magnitude = 0.0;
  for (const auto& t : terms_) {
    Interval m{t.coef, t.coef};
    for (std::size_t i = 0; i < dim_; ++i) m = imul(m, ipow({box.lo[i], box.hi[i]}, t.exps[i]));
    sum.lo += m.lo;
    sum.hi += m.hi;
    magnitude += std::max(std::abs(m.lo), std::abs(m.hi));
  }
  auto w = widen(sum, magnitude);
  return {w.lo, w.hi, 0.0};
}

double PolynomialOracle::value(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coef;
    for (std::size_t i = 0; i < dim_; ++i) m *= std::pow(x[i], t.exps[i]);
    sum += m;
  }
  return sum;
}

PiecewiseConstantOracle::PiecewiseConstantOracle(std::size_t dim, std::vector<Piece> pieces, double fallback)
    : dim_(dim), pieces_(std::move(pieces)), fallback_(fallback) {
  std::vector<Box> boxes;
  for (const auto& p : pieces_) {
    if (p.box.dim != dim) throw InputError("piece dimension mismatch");
    boxes.push_back(p.box);
  }
  BoxElem check(boxes);
}

Range PiecewiseConstantOracle::range(const Box& box) const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double covered = 0.0;
  bool corners_covered = true;
  for (const auto& p : pieces_) {
    double ov = p.box.overlap(box);
    if (ov > 0) {
      covered += ov;
      lo = std::min(lo, p.value);
      hi = std::max(hi, p.value);
    }
  }
  if (box.closed) {
    // The upper corner region is where a closed cell reaches past every
    // half-open piece; check each corner point directly.
    for (std::size_t mask = 0; mask < (std::size_t{1} << box.dim); ++mask) {
      std::vector<double> corner(box.dim);
      for (std::size_t i = 0; i < box.dim; ++i) corner[i] = (mask >> i) & 1u ? box.hi[i] : box.lo[i];
      double v = value(corner);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      bool inside_piece = std::any_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) { return p.box.contains(corner); });
      corners_covered = corners_covered && inside_piece;
    }
  }
  double vol = box.volume();
  if (covered < vol * (1 - 1e-12) || !corners_covered || vol == 0.0) {
    lo = std::min(lo, fallback_);
    hi = std::max(hi, fallback_);
  }
  return {lo, hi, 0.0};
}

double PiecewiseConstantOracle::value(std::span<const double> x) const {
  for (const auto& p : pieces_) {
    if (p.box.contains(x)) return p.value;
  }
  return fallback_;
}

LipschitzOracle::LipschitzOracle(std::size_t dim, Fn f, double lipschitz)
    : dim_(dim), f_(std::move(f)), lipschitz_(lipschitz) {
  if (lipschitz < 0) throw InputError("Lipschitz constant must be nonnegative");
}

Range LipschitzOracle::range(const Box& box) const {
  auto c = box.center();
  double fc = f_(c);
  double r2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) r2 += 0.25 * box.width(i) * box.width(i);
  auto w = widen({fc - lipschitz_ * std::sqrt(r2), fc + lipschitz_ * std::sqrt(r2)}, std::abs(fc) + 1.0);
  return {w.lo, w.hi, 0.0};
}

Placement SublevelSet::classify(const Box& box) const {
  auto r = p_.range(box);
  if (r.hi <= 0) return Placement::inside;
  if (r.lo > 0) return Placement::outside;
  return Placement::boundary;
}

BoxUnionSet::BoxUnionSet(BoxElem elem) : elem_(std::move(elem)), dim_(0) {
  if (elem_.boxes().empty()) throw InputError("box union needs at least one box to fix its dimension");
  dim_ = elem_.boxes().front().dim;
}

Placement BoxUnionSet::classify(const Box& box) const {
  double covered = 0.0;
  for (const auto& b : elem_.boxes()) covered += b.overlap(box);
  if (covered == 0.0) return box.degenerate() ? Placement::boundary : Placement::outside;
  if (covered >= box.volume() && !box.closed) return Placement::inside;
  return Placement::boundary;
}

Placement RationalPointsSet::classify(const Box& box) const {
  return box.degenerate() ? Placement::boundary : Placement::mixed;
}

Placement PointSet::classify(const Box& box) const {
  return box.contains(point_) ? Placement::boundary : Placement::outside;
}

bool PointSet::contains(std::span<const double> x) const {
  return std::equal(point_.begin(), point_.end(), x.begin());
}

UnionSet::UnionSet(SetPtr a, SetPtr b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_->dimension() != b_->dimension()) throw InputError("set dimension mismatch");
}

Placement UnionSet::classify(const Box& box) const { return combine_union(a_->classify(box), b_->classify(box)); }

IntersectionSet::IntersectionSet(SetPtr a, SetPtr b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_->dimension() != b_->dimension()) throw InputError("set dimension mismatch");
}

Placement IntersectionSet::classify(const Box& box) const {
  return flip(combine_union(flip(a_->classify(box)), flip(b_->classify(box))));
}

Placement ComplementSet::classify(const Box& box) const { return flip(a_->classify(box)); }

MaskedOracle::MaskedOracle(OraclePtr f, SetPtr set) : f_(std::move(f)), set_(std::move(set)) {
  if (f_->dimension() != set_->dimension()) throw InputError("function and set dimension mismatch");
}

Range MaskedOracle::range(const Box& box) const {
  auto place = set_->classify(box);
  if (place == Placement::outside) return {0.0, 0.0, 0.0};
  auto r = f_->range(box);
  if (place == Placement::inside) return r;
  Range out{std::min(r.lo, 0.0), std::max(r.hi, 0.0), 0.0};
  // Every sub-box meets both E (values in [lo, hi]) and its complement (value 0).
  if (place == Placement::mixed) out.hereditary_osc = r.lo > 0 ? r.lo : (r.hi < 0 ? -r.hi : 0.0);
  return out;
}

SimpleFunctionOracle::SimpleFunctionOracle(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw InputError("simple function needs at least one cell");
  for (const auto& c : cells_) {
    if (c.set->dimension() != cells_.front().set->dimension()) throw InputError("set dimension mismatch");
  }
}

Range SimpleFunctionOracle::range(const Box& box) const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool all_outside = true;
  bool covered = false;
  for (const auto& c : cells_) {
    auto place = c.set->classify(box);
    if (place == Placement::outside) continue;
    all_outside = false;
    if (place == Placement::inside) covered = true;
    lo = std::min(lo, c.value);
    hi = std::max(hi, c.value);
  }
  if (all_outside) return {0.0, 0.0, 0.0};
  // Unless some cell swallows the box, part of it may lie outside every cell.
  if (!covered) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  return {lo, hi, 0.0};
}

double SimpleFunctionOracle::value(std::span<const double> x) const {
  for (const auto& c : cells_) {
    if (c.set->contains(x)) return c.value;
  }
  return 0.0;
}

OraclePtr constant_oracle(std::size_t dim, double c) {
  return std::make_shared<PolynomialOracle>(dim, std::vector<PolynomialOracle::Term>{{c, {}}});
}

OraclePtr dirichlet_oracle(std::size_t dim) {
  return std::make_shared<MaskedOracle>(constant_oracle(dim, 1.0), std::make_shared<RationalPointsSet>(dim));
}

OraclePtr indicator_oracle(SetPtr set) {
  auto dim = set->dimension();
  return std::make_shared<MaskedOracle>(constant_oracle(dim, 1.0), std::move(set));
}

}  // namespace famkit
