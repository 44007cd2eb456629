#include "json_io.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace famkit::io {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const json* find(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::size_t read_index(const json& j, const GroundSet& ground) {
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v < 0 || static_cast<std::size_t>(v) >= ground.size()) throw InputError("set element index out of range");
    return static_cast<std::size_t>(v);
  }
  if (j.is_string()) {
    auto idx = ground.index_of(j.get<std::string>());
    if (!idx) throw InputError("unknown ground label \"" + j.get<std::string>() + "\"");
    return *idx;
  }
  throw InputError("set elements must be labels or indices");
}

PolynomialOracle read_poly(const json& j, std::size_t dim) {
  if (j.is_array()) {
    if (dim != 1) throw InputError("coefficient-list polynomials are univariate");
    std::vector<double> c;
    for (const auto& v : j) c.push_back(read_real(v));
    return PolynomialOracle::univariate(std::move(c));
  }
  std::vector<PolynomialOracle::Term> terms;
  for (const auto& t : need(j, "terms")) {
    PolynomialOracle::Term term;
    term.coef = read_real(need(t, "coef"));
    for (const auto& e : need(t, "exps")) term.exps.push_back(e.get<unsigned>());
    terms.push_back(std::move(term));
  }
  std::size_t d = find(j, "dim") ? need(j, "dim").get<std::size_t>() : dim;
  if (d != dim) throw InputError("polynomial dimension does not match the domain");
  return PolynomialOracle(d, std::move(terms));
}

SetPtr named_set(const std::string& name, std::size_t dim) {
  if (name == "rationals" || name == "dirichlet") return std::make_shared<RationalPointsSet>(dim);
  if (name == "triangle") {
    if (dim != 2) throw InputError("the triangle fixture lives in the unit square");
    return std::make_shared<SublevelSet>(PolynomialOracle(2, {{1.0, {0, 1}}, {-1.0, {1, 0}}}));
  }
  throw InputError("unknown set fixture \"" + name + "\"");
}

}  // namespace

Rational read_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("rationals are written as \"p/q\" strings");
}

double read_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double x;
    if (!(in >> x) || !in.eof()) throw InputError("malformed real \"" + s + "\"");
    return x;
  }
  throw InputError("reals are written as numbers or decimal strings");
}

GroundSet read_ground(const json& j) {
  if (j.is_number_integer()) {
    auto n = j.get<long long>();
    if (n < 1) throw InputError("ground set must be nonempty");
    auto un = static_cast<std::size_t>(n);
    return GroundSet(un, std::max(kDefaultGroundCap, std::min(un, kGroundCapacity)));
  }
  if (j.is_array()) {
    std::vector<std::string> labels;
    for (const auto& v : j) labels.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    auto n = labels.size();
    return GroundSet(std::move(labels), std::max(kDefaultGroundCap, std::min(n, kGroundCapacity)));
  }
  throw InputError("ground set is an integer or an array of labels");
}

SetElem read_set(const json& j, const GroundSet& ground) {
  if (!j.is_array()) throw InputError("sets are arrays of labels or indices");
  SetElem s;
  for (const auto& v : j) s.set(read_index(v, ground));
  return s;
}

std::vector<SetElem> read_sets(const json& j, const GroundSet& ground) {
  if (!j.is_array()) throw InputError("expected an array of sets");
  std::vector<SetElem> out;
  for (const auto& v : j) out.push_back(read_set(v, ground));
  return out;
}

Algebra read_algebra(const json* j, const GroundSet& ground) {
  if (!j) return Algebra::power_set(ground);
  if (const auto* atoms = find(*j, "atoms")) return Algebra(ground, read_sets(*atoms, ground));
  if (const auto* gens = find(*j, "generators")) {
    auto g = read_sets(*gens, ground);
    return generate_algebra(ground, g);
  }
  throw InputError("algebra needs \"atoms\" or \"generators\"");
}

Fam read_fam(const json& j) {
  auto ground = read_ground(need(j, "ground"));
  if (const auto* values = find(j, "values")) {
    auto a = read_assignment(*values, ground);
    auto r = extend_assignment(a);
    if (!r.feasible) throw InputError("values are not additively consistent: " + r.certificate.message);
    // The fam is the one on ⟨dom⟩, and it must be pinned down by the values.
    const auto& alg = r.witness->algebra();
    for (const auto& atom : alg.atoms()) {
      auto b = extension_bounds(a, atom);
      if (!b || b->first != b->second) throw InputError("values do not determine a unique fam on the sets they generate");
    }
    return *r.witness;
  }
  auto algebra = read_algebra(find(j, "algebra"), ground);
  const auto& w = need(j, "weights");
  std::vector<Rational> weights(algebra.atom_count());
  if (w.is_array()) {
    // Aligned with the atoms as listed in the input.
    const auto* alg = find(j, "algebra");
    const auto* atoms = alg ? find(*alg, "atoms") : nullptr;
    if (!atoms) throw InputError("array weights need an explicit \"atoms\" list");
    auto listed = read_sets(*atoms, ground);
    if (listed.size() != w.size()) throw InputError("one weight per atom");
    std::vector<std::pair<SetElem, Rational>> pieces;
    for (std::size_t i = 0; i < listed.size(); ++i) pieces.emplace_back(listed[i], read_rational(w[i]));
    return Fam::from_pieces(ground, std::move(pieces));
  }
  if (!w.is_object()) throw InputError("weights are an object keyed by atom or an array");
  std::map<std::string, std::size_t> key_of;
  for (std::size_t i = 0; i < algebra.atom_count(); ++i) key_of[atom_key(algebra.atoms()[i], ground)] = i;
  std::vector<bool> seen(algebra.atom_count());
  for (const auto& [key, value] : w.items()) {
    auto it = key_of.find(key);
    if (it == key_of.end()) throw InputError("weight key \"" + key + "\" is not an atom");
    weights[it->second] = read_rational(value);
    seen[it->second] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw InputError("no weight for atom \"" + atom_key(algebra.atoms()[i], ground) + "\"");
  }
  return Fam(std::move(algebra), std::move(weights));
}

Partition read_partition(const json* j, const Algebra& algebra) {
  if (!j) return Partition::atoms_of(algebra);
  return Partition(algebra, read_sets(*j, algebra.ground()));
}

ExactFn read_table(const json& j, const GroundSet& ground) {
  ExactFn f(ground.size());
  const json& t = j.is_object() && j.contains("table") ? j.at("table") : j;
  if (t.is_array()) {
    if (t.size() != ground.size()) throw InputError("table needs one value per ground point");
    for (std::size_t i = 0; i < t.size(); ++i) f[i] = read_rational(t[i]);
    return f;
  }
  if (!t.is_object()) throw InputError("table is an object keyed by label or an array");
  for (const auto& [key, value] : t.items()) {
    auto idx = ground.index_of(key);
    if (!idx) throw InputError("unknown ground label \"" + key + "\"");
    f[*idx] = read_rational(value);
  }
  return f;
}

PartialAssignment read_assignment(const json& j, const GroundSet& ground) {
  if (!j.is_array()) throw InputError("assignment is an array of [set, value] pairs");
  PartialAssignment a{ground, {}};
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw InputError("assignment entries are [set, value]");
    a.pairs.emplace_back(read_set(pair[0], ground), read_rational(pair[1]));
  }
  a.validate();
  return a;
}

TargetSet read_target(const json& j) {
  if (const auto* b = find(j, "between")) {
    if (!b->is_array() || b->size() != 2) throw InputError("\"between\" takes [lo, hi]");
    return TargetSet::between(read_rational((*b)[0]), read_rational((*b)[1]));
  }
  if (const auto* o = find(j, "one_of")) {
    std::vector<Rational> v;
    for (const auto& x : *o) v.push_back(read_rational(x));
    return TargetSet::one_of(std::move(v));
  }
  throw InputError("target needs \"between\" or \"one_of\"");
}

Box read_box(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("box is an array of [lo, hi] pairs");
  std::vector<double> lo, hi;
  for (const auto& axis : j) {
    if (!axis.is_array() || axis.size() != 2) throw InputError("box axes are [lo, hi] pairs");
    lo.push_back(read_real(axis[0]));
    hi.push_back(read_real(axis[1]));
  }
  return Box::make(lo, hi);
}

OraclePtr read_function(const json& j, std::size_t dim) {
  if (const auto* p = find(j, "poly")) return std::make_shared<PolynomialOracle>(read_poly(*p, dim));
  if (const auto* pw = find(j, "piecewise")) {
    std::vector<PiecewiseConstantOracle::Piece> pieces;
    for (const auto& piece : *pw) pieces.push_back({read_box(need(piece, "box")), read_real(need(piece, "value"))});
    double fallback = find(j, "default") ? read_real(j.at("default")) : 0.0;
    return std::make_shared<PiecewiseConstantOracle>(dim, std::move(pieces), fallback);
  }
  if (const auto* ind = find(j, "indicator")) {
    return indicator_oracle(ind->is_string() ? named_set(ind->get<std::string>(), dim) : read_set_oracle(*ind, dim));
  }
  if (find(j, "table")) throw InputError("table functions need a finite fam, not a box");
  throw InputError("function needs \"poly\", \"piecewise\", \"indicator\" or \"table\"");
}

SetPtr read_set_oracle(const json& j, std::size_t dim) {
  if (j.is_string()) return named_set(j.get<std::string>(), dim);
  if (const auto* s = find(j, "sublevel")) return std::make_shared<SublevelSet>(read_poly(*s, dim));
  if (const auto* b = find(j, "boxes")) {
    std::vector<Box> boxes;
    for (const auto& box : *b) boxes.push_back(read_box(box));
    return std::make_shared<BoxUnionSet>(BoxElem(std::move(boxes)));
  }
  if (const auto* p = find(j, "point")) {
    std::vector<double> x;
    for (const auto& v : *p) x.push_back(read_real(v));
    if (x.size() != dim) throw InputError("point dimension does not match the domain");
    return std::make_shared<PointSet>(std::move(x));
  }
  if (const auto* u = find(j, "union")) {
    if (!u->is_array() || u->empty()) throw InputError("\"union\" takes a nonempty array of sets");
    SetPtr acc = read_set_oracle((*u)[0], dim);
    for (std::size_t i = 1; i < u->size(); ++i) acc = std::make_shared<UnionSet>(acc, read_set_oracle((*u)[i], dim));
    return acc;
  }
  if (const auto* x = find(j, "intersection")) {
    if (!x->is_array() || x->empty()) throw InputError("\"intersection\" takes a nonempty array of sets");
    SetPtr acc = read_set_oracle((*x)[0], dim);
    for (std::size_t i = 1; i < x->size(); ++i)
      acc = std::make_shared<IntersectionSet>(acc, read_set_oracle((*x)[i], dim));
    return acc;
  }
  if (const auto* c = find(j, "complement")) return std::make_shared<ComplementSet>(read_set_oracle(*c, dim));
  throw InputError("set needs \"sublevel\", \"boxes\", \"point\", \"union\", \"intersection\", \"complement\" or a fixture name");
}

json write_rational(const Rational& r) { return to_string(r); }

json write_real(double x) {
  // Shortest form that reads back to the same double; independent of locale.
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

json write_set(const SetElem& s, const GroundSet& ground) {
  json out = json::array();
  for (auto i : s.indices()) out.push_back(ground.label(i));
  return out;
}

std::string atom_key(const SetElem& atom, const GroundSet& ground) {
  std::string key;
  for (auto i : atom.indices()) {
    if (!key.empty()) key += ',';
    key += ground.label(i);
  }
  return key;
}

json write_fam(const Fam& fam) {
  const auto& g = fam.ground();
  json atoms = json::array();
  json weights = json::object();
  for (std::size_t i = 0; i < fam.algebra().atom_count(); ++i) {
    atoms.push_back(write_set(fam.algebra().atoms()[i], g));
    weights[atom_key(fam.algebra().atoms()[i], g)] = write_rational(fam.weight(i));
  }
  return {{"ground", g.labels()}, {"algebra", {{"atoms", atoms}}}, {"weights", weights}};
}

json write_certificate(const Certificate& c, const GroundSet& ground) {
  static const char* names[] = {"none", "separating_h", "order_pair", "filter_meet",
                                "filter_order", "farkas_rows", "no_point"};
  json out = {{"kind", names[static_cast<int>(c.kind)]}};
  if (!c.h.empty()) {
    json h = json::array();
    for (const auto& v : c.h) h.push_back(write_rational(v));
    out["h"] = h;
  }
  if (c.kind == Certificate::Kind::order_pair || c.kind == Certificate::Kind::filter_meet ||
      c.kind == Certificate::Kind::filter_order) {
    out["a"] = write_set(c.a, ground);
    out["b"] = write_set(c.b, ground);
  }
  if (!c.generators.empty()) {
    json g = json::array();
    for (const auto& s : c.generators) g.push_back(write_set(s, ground));
    out["generators"] = g;
  }
  if (c.kind == Certificate::Kind::filter_meet || c.kind == Certificate::Kind::filter_order) out["side"] = c.side;
  if (!c.message.empty()) out["message"] = c.message;
  return out;
}

json write_extension(const ExtensionResult& r, const GroundSet& ground) {
  json out = {{"feasible", r.feasible}};
  if (r.witness) out["witness"] = write_fam(*r.witness);
  out["certificate"] = write_certificate(r.certificate, ground);
  return out;
}

json write_exact_integral(const ExactIntegral& r) {
  json out = {{"lower", write_rational(r.lower)},
              {"upper", write_rational(r.upper)},
              {"status", to_string(r.integrable ? Status::integrable : Status::not_integrable)}};
  if (r.value) out["value"] = write_rational(*r.value);
  return out;
}

json write_report(const IntegralReport& r) {
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back({{"cells", t.cells}, {"lower", write_real(t.lower)}, {"upper", write_real(t.upper)}});
  json out = {{"lower", write_real(r.lower)},
              {"upper", write_real(r.upper)},
              {"status", to_string(r.status)},
              {"estimate", write_real(r.estimate)},
              {"gap_floor", write_real(r.gap_floor)},
              {"cells", r.cells},
              {"trace", trace}};
  if (r.value) out["value"] = write_real(*r.value);
  return out;
}

json write_jordan(const JordanReport& r) {
  json out = {{"status", r.status == Status::integrable ? "jordan"
                         : r.status == Status::not_integrable ? "not_jordan"
                                                               : "undecided"},
              {"inner", {write_real(r.inner.first), write_real(r.inner.second)}},
              {"outer", {write_real(r.outer.first), write_real(r.outer.second)}},
              {"inside", write_real(r.inside)},
              {"boundary", write_real(r.boundary)},
              {"mixed", write_real(r.mixed)},
              {"cells", r.cells}};
  if (r.status == Status::integrable) out["measure"] = write_real(r.measure);
  if (r.witness) {
    auto boxes = [](const BoxElem& e) {
      json arr = json::array();
      for (const auto& b : e.boxes()) {
        json axes = json::array();
        for (std::size_t i = 0; i < b.dim; ++i) axes.push_back({write_real(b.lo[i]), write_real(b.hi[i])});
        arr.push_back(axes);
      }
      return arr;
    };
    out["witness"] = {{"A", boxes(r.witness->first)}, {"B", boxes(r.witness->second)}};
  }
  return out;
}

namespace {

void flatten(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
  }
}

}  // namespace

std::string as_table(const json& j) {
  std::string out;
  flatten(j, "", out);
  return out;
}

}  // namespace famkit::io
