#include "famkit/fam.hpp"

#include <algorithm>
#include <numeric>

namespace famkit {

Fam::Fam(Algebra algebra, std::vector<Rational> weights)
    : algebra_(std::move(algebra)), weights_(std::move(weights)), total_(0) {
  if (weights_.size() != algebra_.atom_count()) throw InputError("one weight per atom is required");
  for (const auto& w : weights_) {
    if (w < 0) throw InputError("fam weights must be nonnegative");
    total_ += w;
  }
}

Fam Fam::from_pieces(const GroundSet& ground, std::vector<std::pair<SetElem, Rational>> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SetElem> atoms;
  std::vector<Rational> weights;
  for (auto& [a, w] : pieces) {
    atoms.push_back(a);
    weights.push_back(std::move(w));
  }
  return Fam(Algebra(ground, std::move(atoms)), std::move(weights));
}

Rational Fam::eval(const SetElem& b) const {
  Rational sum = 0;
  for (std::size_t i = 0; i < algebra_.atom_count(); ++i) {
    const auto& a = algebra_.atoms()[i];
    if (a.subset_of(b)) {
      sum += weights_[i];
    } else if (a.intersects(b)) {
      throw DomainError("set is not an element of the fam's algebra");
    }
  }
  if (!algebra_.ground().owns(b)) throw DomainError("set is not an element of the fam's algebra");
  return sum;
}

Rational Fam::eval_mask(std::uint64_t atom_mask) const {
  Rational sum = 0;
  for (std::size_t i = 0; i < weights_.size() && i < 64; ++i) {
    if ((atom_mask >> i) & 1u) sum += weights_[i];
  }
  return sum;
}

Fam uniform_fam(const GroundSet& ground, const SetElem& u) {
  ground.require(u, "uniform support");
  if (u.empty()) throw InputError("uniform measure needs a nonempty support");
  auto algebra = Algebra::power_set(ground);
  Rational share(1, static_cast<unsigned long>(u.count()));
  std::vector<Rational> weights(ground.size(), Rational(0));
  for (auto x : u.indices()) weights[algebra.atom_of(x)] = share;
  return Fam(std::move(algebra), std::move(weights));
}

Fam filter_fam(const Algebra& algebra, std::span<const SetElem> generators) {
  SetElem core = algebra.ground().full();
  for (const auto& g : generators) {
    algebra.ground().require(g, "filter generator");
    core &= g;
  }
  if (core.empty()) throw DomainError("filter generators have empty intersection");
  auto refined = refine_algebra(algebra, generators);
  std::vector<SetElem> atoms{core};
  for (const auto& a : refined.atoms()) {
    if (!a.intersects(core)) atoms.push_back(a);
  }
  Algebra generated(algebra.ground(), std::move(atoms));
  std::vector<Rational> weights(generated.atom_count(), Rational(0));
  for (std::size_t i = 0; i < generated.atom_count(); ++i) {
    if (generated.atoms()[i] == core) weights[i] = 1;
  }
  return Fam(std::move(generated), std::move(weights));
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Fam pushforward(const Fam& fam, std::span<const std::size_t> map, const GroundSet& target) {
  const auto& algebra = fam.algebra();
  if (map.size() != algebra.ground().size()) throw InputError("pushforward map must be total on the ground set");
  for (auto y : map) {
    if (y >= target.size()) throw InputError("pushforward map leaves the target ground set");
  }
  // A ⊆ Y is measurable iff h⁻¹[A] is a union of atoms, so all image points of
  // one atom must stay together; points with empty fibre are free singletons.
  DisjointSets classes(target.size());
  for (const auto& a : algebra.atoms()) {
    auto pts = a.indices();
    for (std::size_t k = 1; k < pts.size(); ++k) classes.unite(map[pts[0]], map[pts[k]]);
  }
  std::vector<SetElem> blocks(target.size());
  for (std::size_t y = 0; y < target.size(); ++y) blocks[classes.find(y)].set(y);
  std::vector<SetElem> atoms;
  for (auto& b : blocks) {
    if (!b.empty()) atoms.push_back(b);
  }
  Algebra image(target, atoms);
  std::vector<Rational> weights(image.atom_count(), Rational(0));
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    auto x = algebra.atoms()[i].first();
    weights[image.atom_of(map[x])] += fam.weight(i);
  }
  return Fam(std::move(image), std::move(weights));
}

Fam restrict(const Fam& fam, const SetElem& b) {
  const auto& algebra = fam.algebra();
  if (b.empty()) throw DomainError("cannot restrict to the empty set");
  if (!contains(algebra, b)) throw DomainError("restriction set is not an element of the algebra");
  auto pts = b.indices();
  std::vector<std::string> labels;
  std::vector<std::size_t> position(algebra.ground().size(), 0);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    labels.push_back(algebra.ground().label(pts[k]));
    position[pts[k]] = k;
  }
  GroundSet sub(std::move(labels), std::max(kDefaultGroundCap, pts.size()));
  std::vector<SetElem> atoms;
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    const auto& a = algebra.atoms()[i];
    if (!a.subset_of(b)) continue;
    SetElem moved;
    for (auto x : a.indices()) moved.set(position[x]);
    atoms.push_back(moved);
  }
  Algebra restricted(sub, atoms);
  weights.assign(restricted.atom_count(), Rational(0));
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    const auto& a = algebra.atoms()[i];
    if (!a.subset_of(b)) continue;
    weights[restricted.atom_of(position[a.first()])] = fam.weight(i);
  }
  return Fam(std::move(restricted), std::move(weights));
}

FamFlags classify(const Fam& fam) {
  FamFlags flags;
  flags.degenerate = fam.total() == 0;
  flags.probability = fam.total() == 1;
  flags.strictly_positive = std::all_of(fam.weights().begin(), fam.weights().end(),
                                        [](const Rational& w) { return w > 0; });
  bool singletons_in = std::all_of(fam.algebra().atoms().begin(), fam.algebra().atoms().end(),
                                   [](const SetElem& a) { return a.count() == 1; });
  flags.free = singletons_in && flags.degenerate;
  flags.finite_sets_null = flags.degenerate;
  return flags;
}

std::optional<SupportWitness> uniformly_supported(const Fam& fam) {
  const auto& delta = fam.total();
  if (delta == 0) throw DomainError("uniform support is undefined for the zero fam");
  const auto& algebra = fam.algebra();

  // Every value is a sum of atom weights, so d must clear all atom
  // denominators of w/δ; ℓ <= |b| then reduces to the atoms themselves and
  // only gets harder for larger d, so the least candidate decides.
  mpz_class d = 1;
  for (const auto& w : fam.weights()) {
    Rational share = w / delta;
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), share.get_den_mpz_t());
  }
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    Rational ell = Rational(d) * fam.weight(i) / delta;
    if (ell > Rational(static_cast<unsigned long>(algebra.atoms()[i].count()))) return std::nullopt;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) {
    if (fam.weight(i) > 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fam.weight(a) < fam.weight(b); });
  std::vector<SetElem> cells;
  SetElem rest = algebra.ground().full();
  for (auto i : order) {
    cells.push_back(algebra.atoms()[i]);
    rest = rest.minus(algebra.atoms()[i]);
  }
  if (!rest.empty()) cells.push_back(rest);
  return SupportWitness{d, Partition(algebra, std::move(cells))};
}

bool has_uap(const Fam& fam) {
  if (fam.total() == 0) return true;
  return uniformly_supported(fam).has_value();
}

}  // namespace famkit
