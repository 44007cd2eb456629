#include "famkit/boolalg.hpp"

#include "famkit/rational.hpp"

#include <algorithm>
#include <bit>

namespace famkit {

SetElem::SetElem(std::initializer_list<std::size_t> indices) {
  for (auto i : indices) {
    if (i >= kGroundCapacity) throw InputError("set element index beyond storage capacity");
    set(i);
  }
}

SetElem SetElem::from_indices(std::span<const std::size_t> indices) {
  SetElem s;
  for (auto i : indices) {
    if (i >= kGroundCapacity) throw InputError("set element index beyond storage capacity");
    s.set(i);
  }
  return s;
}

SetElem SetElem::full(std::size_t n) {
  SetElem s;
  for (std::size_t w = 0; w < kWords && n > 0; ++w) {
    if (n >= 64) {
      s.words_[w] = ~std::uint64_t{0};
      n -= 64;
    } else {
      s.words_[w] = (std::uint64_t{1} << n) - 1;
      n = 0;
    }
  }
  return s;
}

std::size_t SetElem::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool SetElem::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::size_t SetElem::extent() const {
  for (std::size_t w = kWords; w-- > 0;) {
    if (words_[w] != 0) return w * 64 + 64 - static_cast<std::size_t>(std::countl_zero(words_[w]));
  }
  return 0;
}

std::size_t SetElem::first() const {
  for (std::size_t w = 0; w < kWords; ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return kGroundCapacity;
}

std::vector<std::size_t> SetElem::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < kWords; ++w) {
    auto bits = words_[w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

bool SetElem::subset_of(const SetElem& other) const {
  for (std::size_t w = 0; w < kWords; ++w) {
    if (words_[w] & ~other.words_[w]) return false;
  }
  return true;
}

bool SetElem::intersects(const SetElem& other) const {
  for (std::size_t w = 0; w < kWords; ++w) {
    if (words_[w] & other.words_[w]) return true;
  }
  return false;
}

SetElem SetElem::complement(std::size_t n) const { return full(n).minus(*this); }

SetElem SetElem::minus(const SetElem& other) const {
  SetElem r = *this;
  for (std::size_t w = 0; w < kWords; ++w) r.words_[w] &= ~other.words_[w];
  return r;
}

SetElem& SetElem::operator|=(const SetElem& o) {
  for (std::size_t w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
  return *this;
}

SetElem& SetElem::operator&=(const SetElem& o) {
  for (std::size_t w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
  return *this;
}

std::strong_ordering operator<=>(const SetElem& a, const SetElem& b) {
  for (std::size_t w = 0; w < SetElem::kWords; ++w) {
    auto diff = a.words_[w] ^ b.words_[w];
    if (diff == 0) continue;
    auto low = diff & (~diff + 1);
    return (a.words_[w] & low) ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::size_t SetElem::hash() const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto w : words_) h = (h ^ static_cast<std::size_t>(w)) * 0x100000001b3ull;
  return h;
}

// ---------------------------------------------------------------------------

GroundSet::GroundSet(std::size_t n, std::size_t cap) {
  labels_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  if (cap > kGroundCapacity) throw InputError("ground-set cap exceeds storage capacity");
  if (n == 0) throw InputError("ground set must be nonempty");
  if (n > cap) throw CapacityError("ground set larger than configured cap");
}

GroundSet::GroundSet(std::vector<std::string> labels, std::size_t cap) : labels_(std::move(labels)) {
  if (cap > kGroundCapacity) throw InputError("ground-set cap exceeds storage capacity");
  if (labels_.empty()) throw InputError("ground set must be nonempty");
  if (labels_.size() > cap) throw CapacityError("ground set larger than configured cap");
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("ground-set labels must be distinct");
  }
}

std::optional<std::size_t> GroundSet::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

void GroundSet::require(const SetElem& s, const char* what) const {
  if (!owns(s)) throw InputError(std::string(what) + ": set mask out of range of the ground set");
}

// ---------------------------------------------------------------------------

Algebra::Algebra(GroundSet ground, std::vector<SetElem> atoms)
    : ground_(std::move(ground)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InputError("algebra needs at least one atom");
  if (atoms_.size() > kAtomCap) throw CapacityError("atom count exceeds cap");
  std::sort(atoms_.begin(), atoms_.end());
  atom_of_point_.assign(ground_.size(), atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (a.empty()) throw InputError("atoms must be nonempty");
    ground_.require(a, "atom");
    for (auto x : a.indices()) {
      if (atom_of_point_[x] != atoms_.size()) throw InputError("atoms must be pairwise disjoint");
      atom_of_point_[x] = i;
    }
  }
  for (auto idx : atom_of_point_) {
    if (idx == atoms_.size()) throw InputError("atoms must cover the ground set");
  }
}

Algebra Algebra::trivial(GroundSet ground) {
  auto full = ground.full();
  return Algebra(std::move(ground), {full});
}

Algebra Algebra::power_set(GroundSet ground) {
  std::vector<SetElem> atoms;
  for (std::size_t i = 0; i < ground.size(); ++i) atoms.push_back(SetElem{i});
  return Algebra(std::move(ground), std::move(atoms));
}

std::vector<std::size_t> Algebra::atoms_inside(const SetElem& b) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].subset_of(b)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Algebra::atoms_meeting(const SetElem& b) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].intersects(b)) out.push_back(i);
  }
  return out;
}

SetElem Algebra::element(std::uint64_t atom_mask) const {
  SetElem s;
  for (std::size_t i = 0; i < atoms_.size() && i < 64; ++i) {
    if ((atom_mask >> i) & 1u) s |= atoms_[i];
  }
  return s;
}

SetElem Algebra::element(std::span<const std::size_t> atom_indices) const {
  SetElem s;
  for (auto i : atom_indices) s |= atoms_.at(i);
  return s;
}

std::uint64_t Algebra::mask_of(const SetElem& b) const {
  if (atoms_.size() > 64) throw CapacityError("atom mask needs at most 64 atoms");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].subset_of(b)) m |= std::uint64_t{1} << i;
  }
  return m;
}

std::uint64_t Algebra::element_count() const {
  if (atoms_.size() >= 64) throw CapacityError("element count does not fit in 64 bits");
  return std::uint64_t{1} << atoms_.size();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<SetElem> split_atoms(std::vector<SetElem> atoms, std::span<const SetElem> generators) {
  for (const auto& g : generators) {
    std::vector<SetElem> next;
    next.reserve(atoms.size() * 2);
    for (const auto& a : atoms) {
      auto in = a & g;
      auto out = a.minus(g);
      if (!in.empty()) next.push_back(in);
      if (!out.empty()) next.push_back(out);
    }
    if (next.size() > kAtomCap) throw CapacityError("generated algebra exceeds the atom cap");
    atoms = std::move(next);
  }
  return atoms;
}

}  // namespace

Algebra generate_algebra(const GroundSet& ground, std::span<const SetElem> generators) {
  for (const auto& g : generators) ground.require(g, "generator");
  return Algebra(ground, split_atoms({ground.full()}, generators));
}

Algebra refine_algebra(const Algebra& base, std::span<const SetElem> generators) {
  for (const auto& g : generators) base.ground().require(g, "generator");
  return Algebra(base.ground(), split_atoms(base.atoms(), generators));
}

Algebra join_algebras(const Algebra& a, const Algebra& b) {
  if (!(a.ground() == b.ground())) throw InputError("algebras live on different ground sets");
  return refine_algebra(a, b.atoms());
}

bool contains(const Algebra& algebra, const SetElem& b) {
  if (!algebra.ground().owns(b)) return false;
  for (const auto& a : algebra.atoms()) {
    if (a.intersects(b) && !a.subset_of(b)) return false;
  }
  return true;
}

SetElem floor_in(const Algebra& algebra, const SetElem& b) {
  SetElem out;
  for (const auto& a : algebra.atoms()) {
    if (a.subset_of(b)) out |= a;
  }
  return out;
}

SetElem ceil_in(const Algebra& algebra, const SetElem& b) {
  SetElem out;
  for (const auto& a : algebra.atoms()) {
    if (a.intersects(b)) out |= a;
  }
  return out;
}

// ---------------------------------------------------------------------------

Partition::Partition(const Algebra& algebra, std::vector<SetElem> cells)
    : ground_size_(algebra.ground().size()) {
  std::erase_if(cells, [](const SetElem& c) { return c.empty(); });
  SetElem covered;
  for (const auto& c : cells) {
    if (!contains(algebra, c)) throw InputError("partition cell is not an element of the algebra");
    if (c.intersects(covered)) throw InputError("partition cells overlap");
    covered |= c;
  }
  if (!(covered == algebra.ground().full())) throw InputError("partition cells do not cover the ground set");
  std::sort(cells.begin(), cells.end());
  cells_ = std::move(cells);
}

Partition Partition::unit(const Algebra& algebra) { return Partition(algebra, {algebra.ground().full()}); }

Partition Partition::atoms_of(const Algebra& algebra) { return Partition(algebra, algebra.atoms()); }

bool Partition::fits(const Algebra& algebra) const {
  if (ground_size_ != algebra.ground().size()) return false;
  return std::all_of(cells_.begin(), cells_.end(), [&](const SetElem& c) { return contains(algebra, c); });
}

Partition meet_partitions(const Partition& p, const Partition& q) {
  if (p.ground_size() != q.ground_size()) throw InputError("partitions over different ground sets");
  Partition r;
  r.ground_size_ = p.ground_size();
  for (const auto& a : p.cells()) {
    for (const auto& b : q.cells()) {
      auto c = a & b;
      if (!c.empty()) r.cells_.push_back(c);
    }
  }
  std::sort(r.cells_.begin(), r.cells_.end());
  return r;
}

bool is_refinement(const Partition& fine, const Partition& coarse) {
  if (fine.ground_size() != coarse.ground_size()) return false;
  // Both cover the ground set, so it is enough that every fine cell sits in one coarse cell.
  for (const auto& f : fine.cells()) {
    bool inside = std::any_of(coarse.cells().begin(), coarse.cells().end(),
                              [&](const SetElem& c) { return f.subset_of(c); });
    if (!inside) return false;
  }
  return true;
}

}  // namespace famkit
