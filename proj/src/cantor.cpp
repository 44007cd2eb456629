#include "famkit/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace famkit {

namespace {

constexpr unsigned kMaxDepth = 40;

void check_string(std::string_view s) {
  for (char c : s) {
    if (c != '0' && c != '1') throw InputError("cylinder strings use only 0 and 1");
  }
  if (s.size() > kMaxDepth) throw CapacityError("cylinder string too long");
}

std::string level_string(unsigned depth, std::uint64_t k) {
  std::string s(depth, '0');
  for (unsigned i = 0; i < depth; ++i) {
    if ((k >> (depth - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

}  // namespace

CantorClopen::CantorClopen(std::vector<std::string> cylinders) {
  for (const auto& s : cylinders) check_string(s);
  std::set<std::string> set(cylinders.begin(), cylinders.end());
  // Drop cylinders already covered by a shorter one. In lexicographic order a
  // prefix comes right before the strings extending it.
  std::vector<std::string> kept;
  for (const auto& s : set) {
    if (!kept.empty() && s.compare(0, kept.back().size(), kept.back()) == 0) continue;
    kept.push_back(s);
  }
  // Merge sibling pairs until none are left.
  std::set<std::string> work(kept.begin(), kept.end());
  bool merged = true;
  while (merged) {
    merged = false;
    for (auto it = work.begin(); it != work.end(); ++it) {
      const auto& s = *it;
      if (s.empty() || s.back() != '0') continue;
      std::string sib = s;
      sib.back() = '1';
      if (work.count(sib)) {
        std::string parent = s.substr(0, s.size() - 1);
        work.erase(sib);
        work.erase(it);
        work.insert(parent);
        merged = true;
        break;
      }
    }
  }
  cylinders_.assign(work.begin(), work.end());
}

CantorClopen CantorClopen::from_level(unsigned depth, std::vector<std::uint64_t> indices) {
  if (depth > kMaxDepth) throw CapacityError("cylinder depth too large");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (!indices.empty() && indices.back() >= (std::uint64_t{1} << depth)) throw InputError("cylinder index out of range");
  // Merge level by level; whatever fails to pair at a level is final there.
  std::vector<std::string> out;
  for (unsigned d = depth;; --d) {
    std::vector<std::uint64_t> up;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      std::uint64_t k = indices[i];
      if (d > 0 && k % 2 == 0 && i + 1 < indices.size() && indices[i + 1] == k + 1) {
        up.push_back(k / 2);
        ++i;
      } else {
        out.push_back(level_string(d, k));
      }
    }
    indices = std::move(up);
    if (d == 0 || indices.empty()) break;
  }
  CantorClopen c;
  std::sort(out.begin(), out.end());
  c.cylinders_ = std::move(out);
  return c;
}

CantorClopen clopen_union(const CantorClopen& a, const CantorClopen& b) {
  auto all = a.cylinders();
  all.insert(all.end(), b.cylinders().begin(), b.cylinders().end());
  return CantorClopen(std::move(all));
}

Rational cylinder_measure(std::string_view s) {
  check_string(s);
  Rational r(1);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), s.size());
  return r;
}

Rational clopen_measure(const CantorClopen& c) {
  Rational sum = 0;
  for (const auto& s : c.cylinders()) sum += cylinder_measure(s);
  return sum;
}

std::pair<Rational, Rational> iota2_image(std::string_view s) {
  check_string(s);
  Rational a = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      Rational bit(1);
      mpq_div_2exp(bit.get_mpq_t(), bit.get_mpq_t(), i + 1);
      a += bit;
    }
  }
  return {a, a + cylinder_measure(s)};
}

Box iota2_box(std::string_view s) {
  auto [a, b] = iota2_image(s);
  Box box;
  box.dim = 1;
  box.lo[0] = to_double(a);
  box.hi[0] = to_double(b);
  box.closed = s.find('0') == std::string_view::npos;
  return box;
}

IntegralReport cantor_integrate(const RangeOracle& g, const CantorOptions& opts) {
  if (!(opts.eps > 0) || !std::isfinite(opts.eps)) throw InputError("epsilon must be a positive number");
  if (g.dimension() != 1) throw InputError("Cantor integrand must be a function on [0,1]");
  if (opts.max_depth > kMaxDepth) throw CapacityError("cylinder depth too large");
  IntegralReport out;
  for (unsigned d = 0; d <= opts.max_depth; ++d) {
    CellSums s = cylinder_sums(g, d, opts.exec);
    if (!std::isfinite(s.lower) || !std::isfinite(s.upper)) throw InputError("function is unbounded on [0,1]");
    out.trace.push_back({static_cast<std::size_t>(s.cells), s.lower, s.upper});
    double guard = rounding_guard(s.magnitude, s.cells);
    out.lower = s.lower - guard;
    out.upper = s.upper + guard;
    out.estimate = 0.5 * (s.lower + s.upper);
    out.gap_floor = std::max(0.0, s.floor - guard);
    out.cells = s.cells;
    if (out.gap_floor > 0) {
      out.status = Status::not_integrable;
      return out;
    }
    if (out.upper - out.lower < opts.eps) {
      out.status = Status::integrable;
      out.value = out.estimate;
      return out;
    }
  }
  out.status = Status::undecided;
  return out;
}

OscillationCover oscillation_cover(const RangeOracle& g, double threshold, unsigned depth) {
  if (!(threshold > 0)) throw InputError("oscillation threshold must be positive");
  if (g.dimension() != 1) throw InputError("Cantor integrand must be a function on [0,1]");
  if (depth > kMaxDepth) throw CapacityError("cylinder depth too large");
  std::vector<std::uint64_t> level{0};
  std::vector<std::uint64_t> certified;
  for (unsigned d = 0;; ++d) {
    std::vector<std::uint64_t> keep;
    certified.clear();
    for (auto k : level) {
      Box b = iota2_box(level_string(d, k));
      Range r = g.range(b);
      if (r.hi - r.lo >= threshold) {
        keep.push_back(k);
        if (r.hereditary_osc >= threshold) certified.push_back(k);
      }
    }
    if (d == depth || keep.empty()) {
      OscillationCover out;
      out.depth = depth;
      // An empty cover stays empty below.
      Rational scale(1);
      mpq_div_2exp(scale.get_mpq_t(), scale.get_mpq_t(), d);
      out.measure = Rational(static_cast<unsigned long>(keep.size())) * scale;
      out.certified = Rational(static_cast<unsigned long>(certified.size())) * scale;
      out.cover = CantorClopen::from_level(d, std::move(keep));
      return out;
    }
    level.clear();
    for (auto k : keep) {
      level.push_back(2 * k);
      level.push_back(2 * k + 1);
    }
  }
}

LebesgueVitaliReport lebesgue_vitali_check(const RangeOracle& g, double eps, unsigned depth_budget) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InputError("epsilon must be a positive number");
  LebesgueVitaliReport out;
  bool all_small = true, certified = false;
  Rational target = Rational(eps);
  for (int t = 1; t <= 6; ++t) {
    double threshold = std::ldexp(1.0, -t);
    ProfileRow row{threshold, 0, Rational(1), Rational(0)};
    for (unsigned d = 0; d <= depth_budget; ++d) {
      auto c = oscillation_cover(g, threshold, d);
      row = {threshold, d, c.measure, c.certified};
      if (c.certified > 0 || c.measure < target) break;
    }
    certified = certified || row.certified > 0;
    all_small = all_small && row.measure < target;
    out.profile.push_back(row);
  }
  if (certified) {
    out.verdict = Status::not_integrable;
  } else if (all_small) {
    out.verdict = Status::integrable;
  }
  out.integral = cantor_integrate(g, {eps, depth_budget, Exec::parallel});
  return out;
}

SequenceSpace convergent_sequence_space(std::size_t n) {
  if (n == 0) throw InputError("sequence space needs at least one point");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  labels.push_back("tail");
  labels.push_back("1");
  GroundSet ground(labels, std::max(kDefaultGroundCap, labels.size()));
  std::vector<std::pair<SetElem, Rational>> pieces;
  for (std::size_t i = 0; i < n; ++i) pieces.emplace_back(SetElem{i}, Rational(0));
  pieces.emplace_back(SetElem{n, n + 1}, Rational(1));
  SequenceSpace out{Fam::from_pieces(ground, std::move(pieces)), ExactFn(n + 2), SetElem{}};
  for (std::size_t i = 0; i <= n; ++i) {
    Rational step(1);
    mpq_div_2exp(step.get_mpq_t(), step.get_mpq_t(), i + 1);
    out.id[i] = 1 - step;
    out.below_one.set(i);
  }
  out.id[n + 1] = 1;
  return out;
}

}  // namespace famkit
