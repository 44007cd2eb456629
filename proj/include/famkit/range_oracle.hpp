#pragma once

#include "famkit/box.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace famkit {

/// Certified enclosure of f over a box: lo <= f(x) <= hi for every x in the
/// box. `hereditary_osc` is a lower bound on sup f − inf f over every
/// sub-box of positive volume; it certifies non-integrability when positive.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double hereditary_osc = 0.0;
};

/// Bounded real function on ℝⁿ that can enclose its range over boxes.
class RangeOracle {
 public:
  virtual ~RangeOracle() = default;
  virtual std::size_t dimension() const = 0;
  virtual Range range(const Box& box) const = 0;
  virtual double value(std::span<const double> x) const = 0;
};

using OraclePtr = std::shared_ptr<const RangeOracle>;

/// Σ coef · Π xᵢ^{expᵢ}, enclosed by interval arithmetic with outward widening.
class PolynomialOracle final : public RangeOracle {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<unsigned> exps;
  };
  PolynomialOracle(std::size_t dim, std::vector<Term> terms);
  /// c₀ + c₁x + c₂x² + ...
  static PolynomialOracle univariate(std::vector<double> coefficients);

  std::size_t dimension() const override { return dim_; }
  Range range(const Box& box) const override;
  double value(std::span<const double> x) const override;

 private:
  std::size_t dim_;
  std::vector<Term> terms_;
};

/// Constant on each of a list of disjoint boxes, `fallback` elsewhere.
class PiecewiseConstantOracle final : public RangeOracle {
 public:
  struct Piece {
    Box box;
    double value = 0.0;
  };
  PiecewiseConstantOracle(std::size_t dim, std::vector<Piece> pieces, double fallback = 0.0);

  std::size_t dimension() const override { return dim_; }
  Range range(const Box& box) const override;
  double value(std::span<const double> x) const override;

 private:
  std::size_t dim_;
  std::vector<Piece> pieces_;
  double fallback_;
};

/// f with |f(x) − f(y)| <= L·|x − y|₂, enclosed around the box center.
class LipschitzOracle final : public RangeOracle {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  LipschitzOracle(std::size_t dim, Fn f, double lipschitz);

  std::size_t dimension() const override { return dim_; }
  Range range(const Box& box) const override;
  double value(std::span<const double> x) const override { return f_(x); }

 private:
  std::size_t dim_;
  Fn f_;
  double lipschitz_;
};

enum class Placement {
  inside,
  outside,
  /// Undetermined at this resolution.
  boundary,
  /// Every sub-box of positive volume meets both the set and its complement.
  mixed,
};

/// Membership oracle for a subset of ℝⁿ that can classify boxes.
class SetOracle {
 public:
  virtual ~SetOracle() = default;
  virtual std::size_t dimension() const = 0;
  virtual Placement classify(const Box& box) const = 0;
  virtual bool contains(std::span<const double> x) const = 0;
};

using SetPtr = std::shared_ptr<const SetOracle>;

/// {x : p(x) <= 0}.
class SublevelSet final : public SetOracle {
 public:
  explicit SublevelSet(PolynomialOracle p) : p_(std::move(p)) {}
  std::size_t dimension() const override { return p_.dimension(); }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double> x) const override { return p_.value(x) <= 0; }

 private:
  PolynomialOracle p_;
};

class BoxUnionSet final : public SetOracle {
 public:
  explicit BoxUnionSet(BoxElem elem);
  std::size_t dimension() const override { return dim_; }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double> x) const override { return elem_.contains(x); }

 private:
  BoxElem elem_;
  std::size_t dim_;
};

/// Points with all coordinates rational. Every floating-point input is
/// rational, so `contains` is true; the classification is what matters.
class RationalPointsSet final : public SetOracle {
 public:
  explicit RationalPointsSet(std::size_t dim) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double>) const override { return true; }

 private:
  std::size_t dim_;
};

class PointSet final : public SetOracle {
 public:
  explicit PointSet(std::vector<double> point) : point_(std::move(point)) {}
  std::size_t dimension() const override { return point_.size(); }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double> x) const override;

 private:
  std::vector<double> point_;
};

class UnionSet final : public SetOracle {
 public:
  UnionSet(SetPtr a, SetPtr b);
  std::size_t dimension() const override { return a_->dimension(); }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double> x) const override { return a_->contains(x) || b_->contains(x); }

 private:
  SetPtr a_, b_;
};

class IntersectionSet final : public SetOracle {
 public:
  IntersectionSet(SetPtr a, SetPtr b);
  std::size_t dimension() const override { return a_->dimension(); }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double> x) const override { return a_->contains(x) && b_->contains(x); }

 private:
  SetPtr a_, b_;
};

class ComplementSet final : public SetOracle {
 public:
  explicit ComplementSet(SetPtr a) : a_(std::move(a)) {}
  std::size_t dimension() const override { return a_->dimension(); }
  Placement classify(const Box& box) const override;
  bool contains(std::span<const double> x) const override { return !a_->contains(x); }

 private:
  SetPtr a_;
};

/// f · χ_E. With E = ℚⁿ and f ≡ 1 this is the Dirichlet function.
class MaskedOracle final : public RangeOracle {
 public:
  MaskedOracle(OraclePtr f, SetPtr set);
  std::size_t dimension() const override { return f_->dimension(); }
  Range range(const Box& box) const override;
  double value(std::span<const double> x) const override { return set_->contains(x) ? f_->value(x) : 0.0; }

 private:
  OraclePtr f_;
  SetPtr set_;
};

/// Σ cᵢ χ_{Eᵢ} for pairwise disjoint Eᵢ.
class SimpleFunctionOracle final : public RangeOracle {
 public:
  struct Cell {
    SetPtr set;
    double value = 0.0;
  };
  explicit SimpleFunctionOracle(std::vector<Cell> cells);
  std::size_t dimension() const override { return cells_.front().set->dimension(); }
  Range range(const Box& box) const override;
  double value(std::span<const double> x) const override;

 private:
  std::vector<Cell> cells_;
};

OraclePtr constant_oracle(std::size_t dim, double c);
/// Indicator of ℚⁿ ∩ [0,1]ⁿ on the unit box.
OraclePtr dirichlet_oracle(std::size_t dim);
OraclePtr indicator_oracle(SetPtr set);

}  // namespace famkit
