#include "json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

using namespace famkit;
using famkit::io::json;

namespace {

enum Exit { kOk = 0, kInput = 2, kInfeasible = 3, kUndecided = 4 };

struct Flags {
  std::string in;
  std::string eps;
  unsigned depth = 20;
  std::size_t budget = std::size_t{1} << 20;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string fn;
  std::string box;
  std::string set;
  std::string strategy = "adaptive";
};

struct Outcome {
  json report;
  int code = kOk;
};

using Handler = std::function<Outcome(const json&, const Flags&)>;

json load_problem(const Flags& flags, const std::string& kind) {
  if (flags.in.empty()) return json::object();
  json j;
  if (flags.in == "-") {
    j = json::parse(std::cin);
  } else {
    std::ifstream f(flags.in);
    if (!f) throw InputError("cannot open " + flags.in);
    j = json::parse(f);
  }
  if (!j.is_object()) throw InputError("problem file must be a JSON object");
  if (j.contains("version") && j.at("version") != 1) throw InputError("unsupported problem version");
  if (j.contains("kind") && j.at("kind") != kind) {
    throw InputError("problem kind \"" + j.at("kind").get<std::string>() + "\" does not match subcommand " + kind);
  }
  return j;
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Rational exact_eps(const json& p, const Flags& flags) {
  Rational e;
  if (!flags.eps.empty()) {
    e = parse_rational(flags.eps);
  } else if (p.contains("eps")) {
    e = io::read_rational(p.at("eps"));
  } else {
    throw InputError("epsilon required (--eps or \"eps\")");
  }
  if (e <= 0) throw InputError("epsilon must be positive");
  return e;
}

double real_eps(const json& p, const Flags& flags, double fallback) {
  if (!flags.eps.empty()) return io::read_real(json(flags.eps));
  if (p.contains("eps")) return io::read_real(p.at("eps"));
  return fallback;
}

std::size_t budget(const json& p, const Flags& flags) {
  return p.contains("budget") ? p.at("budget").get<std::size_t>() : flags.budget;
}

Fam fam_of(const json& p) { return io::read_fam(p.contains("fam") ? p.at("fam") : p); }

std::pair<Fam, Fam> fam_pair(const json& p) {
  const auto& fams = need(p, "fams");
  if (!fams.is_array() || fams.size() != 2) throw InputError("\"fams\" holds exactly two fams");
  auto a = io::read_fam(fams[0]);
  auto b = io::read_fam(fams[1]);
  if (!(a.ground() == b.ground())) throw InputError("both fams must share a ground set");
  return {std::move(a), std::move(b)};
}

json bounds_rows(const json& p, const PartialAssignment& a) {
  json rows = json::array();
  if (!p.contains("bounds")) return rows;
  for (const auto& s : io::read_sets(p.at("bounds"), a.ground)) {
    auto b = extension_bounds(a, s);
    json row = {{"set", io::write_set(s, a.ground)}};
    if (b) {
      row["lo"] = io::write_rational(b->first);
      row["hi"] = io::write_rational(b->second);
    }
    rows.push_back(row);
  }
  return rows;
}

int extension_code(bool ok) { return ok ? kOk : kInfeasible; }

int status_code(Status s) {
  return s == Status::integrable ? kOk : s == Status::not_integrable ? kInfeasible : kUndecided;
}

Box domain_of(const json& p, const Flags& flags, std::size_t dim_hint) {
  if (!flags.box.empty()) return io::read_box(json::parse(flags.box));
  if (p.contains("box")) return io::read_box(p.at("box"));
  return Box::unit(dim_hint);
}

json function_json(const json& p, const Flags& flags) {
  if (!flags.fn.empty()) return json::parse(flags.fn);
  return need(p, "function");
}

json set_json(const json& p, const Flags& flags) {
  if (!flags.set.empty()) {
    auto j = json::parse(flags.set, nullptr, false);
    return j.is_discarded() ? json(flags.set) : j;
  }
  return need(p, "set");
}

// ---- subcommands --------------------------------------------------------------

Outcome run_algebra(const json& p, const Flags&) {
  auto ground = io::read_ground(need(p, "ground"));
  auto alg = io::read_algebra(p.contains("algebra") ? &p.at("algebra") : nullptr, ground);
  json atoms = json::array();
  for (const auto& a : alg.atoms()) atoms.push_back(io::write_set(a, ground));
  json out = {{"ground", ground.labels()}, {"atoms", atoms}, {"atom_count", alg.atom_count()}};
  if (alg.atom_count() < 64) out["element_count"] = alg.element_count();
  if (p.contains("sets")) {
    json rows = json::array();
    for (const auto& s : io::read_sets(p.at("sets"), ground)) {
      rows.push_back({{"set", io::write_set(s, ground)},
                      {"member", contains(alg, s)},
                      {"floor", io::write_set(floor_in(alg, s), ground)},
                      {"ceil", io::write_set(ceil_in(alg, s), ground)}});
    }
    out["sets"] = rows;
  }
  return {out};
}

Outcome run_fam_check(const json& p, const Flags&) {
  try {
    auto fam = fam_of(p);
    json out = {{"valid", true}, {"fam", io::write_fam(fam)}, {"total", io::write_rational(fam.total())}};
    if (p.contains("eval")) {
      json rows = json::array();
      for (const auto& s : io::read_sets(p.at("eval"), fam.ground())) {
        rows.push_back({{"set", io::write_set(s, fam.ground())}, {"value", io::write_rational(fam.eval(s))}});
      }
      out["eval"] = rows;
    }
    return {out};
  } catch (const std::exception& e) {
    std::cerr << "famkit: " << e.what() << "\n";
    return {{{"valid", false}, {"message", e.what()}}, kInput};
  }
}

Outcome run_classify(const json& p, const Flags&) {
  auto fam = fam_of(p);
  auto f = classify(fam);
  json out = {{"probability", f.probability},         {"strictly_positive", f.strictly_positive},
              {"free", f.free},                       {"finite_sets_null", f.finite_sets_null},
              {"degenerate", f.degenerate},           {"uap", has_uap(fam)}};
  if (!f.degenerate) {
    auto w = uniformly_supported(fam);
    out["uniformly_supported"] = w.has_value();
    if (w) {
      out["d"] = w->d.get_ui();
      json cells = json::array();
      for (const auto& c : w->support.cells()) cells.push_back(io::write_set(c, fam.ground()));
      out["support"] = cells;
    }
  } else {
    out["uniformly_supported"] = false;
  }
  return {out};
}

Outcome run_approx(const json& p, const Flags& flags) {
  auto fam = fam_of(p);
  auto eps = exact_eps(p, flags);
  auto part = io::read_partition(p.contains("partition") ? &p.at("partition") : nullptr, fam.algebra());
  const auto& g = fam.ground();
  FiniteApprox a;
  try {
    if (p.contains("functions")) {
      std::vector<ExactFn> fns;
      for (const auto& t : p.at("functions")) fns.push_back(io::read_table(t, g));
      a = approx_with_integrals(fam, part, eps, fns);
    } else {
      SetElem avoid = p.contains("avoid") ? io::read_set(p.at("avoid"), g) : SetElem{};
      auto policy = p.value("policy", std::string("prefer"));
      if (policy != "prefer" && policy != "require") throw InputError("policy is \"prefer\" or \"require\"");
      a = approx_uniform(fam, part, eps, avoid, policy == "require" ? AvoidPolicy::require : AvoidPolicy::prefer);
    }
  } catch (const DomainError& e) {
    return {{{"feasible", false}, {"message", e.what()}}, kInfeasible};
  }
  json mu = json::object();
  for (const auto& [x, m] : a.mu) mu[g.label(x)] = io::write_rational(m);
  json errs = json::object();
  for (const auto& cell : part.cells()) {
    errs[io::atom_key(cell, g)] = io::write_rational(fam.total() * a.mass(cell) - fam.eval(cell));
  }
  json out = {{"feasible", true}, {"u", io::write_set(a.u, g)}, {"mu", mu},
              {"uniform", a.uniform}, {"errors_per_cell", errs}, {"eps", io::write_rational(eps)}};
  if (p.value("witness", false)) {
    auto w = uap_witness(fam, part, eps);
    out["uap_witness"] = w ? io::write_set(*w, g) : json(nullptr);
  }
  return {out};
}

Outcome run_extend(const json& p, const Flags&) {
  auto ground = io::read_ground(need(p, "ground"));
  auto a = io::read_assignment(need(p, "assignment"), ground);
  auto r = extend_assignment(a);
  json out = io::write_extension(r, ground);
  if (r.feasible) out["bounds"] = bounds_rows(p, a);
  return {out, extension_code(r.feasible)};
}

Outcome run_compatible(const json& p, const Flags&) {
  auto [a, b] = fam_pair(p);
  auto c = compatible(a, b);
  return {{{"compatible", c.compatible}, {"certificate", io::write_certificate(c.certificate, a.ground())}},
          extension_code(c.compatible)};
}

Outcome run_amalgamate(const json& p, const Flags&) {
  auto [a, b] = fam_pair(p);
  auto r = amalgamate(a, b);
  json out = io::write_extension(r, a.ground());
  if (r.feasible) out["bounds"] = bounds_rows(p, merge_assignment(a, b));
  return {out, extension_code(r.feasible)};
}

Outcome run_extend_filter(const json& p, const Flags&) {
  auto fam = fam_of(p);
  auto gens = io::read_sets(need(p, "generators"), fam.ground());
  auto r = extend_with_filter(fam, gens);
  return {io::write_extension(r, fam.ground()), extension_code(r.feasible)};
}

Outcome run_three_way(const json& p, const Flags&) {
  auto [a, b] = fam_pair(p);
  auto gens = io::read_sets(need(p, "generators"), a.ground());
  auto r = three_way_extend(a, b, gens);
  return {io::write_extension(r, a.ground()), extension_code(r.feasible)};
}

Outcome run_constrain(const json& p, const Flags&) {
  std::vector<TargetSet> targets;
  for (const auto& t : need(p, "targets")) targets.push_back(io::read_target(t));
  auto mode = p.value("mode", std::string("sets"));
  ExtensionResult r;
  GroundSet ground(1);
  if (mode == "sets") {
    ground = io::read_ground(need(p, "ground"));
    auto sets = io::read_sets(need(p, "sets"), ground);
    Rational delta = p.contains("delta") ? io::read_rational(p.at("delta")) : Rational(1);
    r = fam_with_constraints(ground, sets, targets, delta);
  } else if (mode == "integrals" || mode == "limits") {
    auto fam = fam_of(p);
    ground = fam.ground();
    std::vector<ExactFn> fns;
    for (const auto& t : need(p, "functions")) fns.push_back(io::read_table(t, ground));
    r = mode == "integrals" ? fam_with_integral_constraints(fam, fns, targets) : ultrafilter_with_limits(fam, fns, targets);
  } else {
    throw InputError("mode is \"sets\", \"integrals\" or \"limits\"");
  }
  return {io::write_extension(r, ground), extension_code(r.feasible)};
}

BoxOptions box_options(const json& p, const Flags& flags) {
  BoxOptions o;
  o.eps = real_eps(p, flags, 1e-6);
  o.budget = budget(p, flags);
  auto s = p.value("strategy", flags.strategy);
  if (s == "adaptive") {
    o.strategy = Strategy::adaptive;
  } else if (s == "uniform") {
    o.strategy = Strategy::uniform;
  } else {
    throw InputError("strategy is \"adaptive\" or \"uniform\"");
  }
  return o;
}

Outcome run_integrate(const json& p, const Flags& flags) {
  if (p.contains("fam")) {
    auto fam = io::read_fam(p.at("fam"));
    auto f = io::read_table(need(p, "function"), fam.ground());
    auto r = p.contains("set") ? integrate_over(f, io::read_set(p.at("set"), fam.ground()), fam) : integrate(f, fam);
    return {io::write_exact_integral(r), r.integrable ? kOk : kInfeasible};
  }
  auto fj = function_json(p, flags);
  auto domain = domain_of(p, flags, p.value("dim", std::size_t{1}));
  auto f = io::read_function(fj, domain.dim);
  auto opts = box_options(p, flags);
  IntegralReport r;
  if (p.contains("set") || !flags.set.empty()) {
    r = integrate_over(f, io::read_set_oracle(set_json(p, flags), domain.dim), domain, opts);
  } else {
    r = integrate(*f, domain, opts);
  }
  json out = io::write_report(r);
  out["eps"] = io::write_real(opts.eps);
  return {out, status_code(r.status)};
}

JordanOptions jordan_options(const json& p, const Flags& flags) {
  JordanOptions o;
  o.eps = real_eps(p, flags, 1e-4);
  o.budget = budget(p, flags);
  o.keep_witness = p.value("witness", false);
  return o;
}

Outcome run_jordan(const json& p, const Flags& flags) {
  if (p.contains("fam")) {
    auto fam = io::read_fam(p.at("fam"));
    auto e = io::read_set(need(p, "set"), fam.ground());
    auto j = is_jordan(e, fam);
    const auto& g = fam.ground();
    json out = {{"status", j.jordan ? "jordan" : "not_jordan"}, {"inner", io::write_rational(j.inner)},
                {"outer", io::write_rational(j.outer)}, {"A", io::write_set(j.a, g)}, {"B", io::write_set(j.b, g)}};
    if (j.jordan) out["measure"] = io::write_rational(j.inner);
    return {out, j.jordan ? kOk : kInfeasible};
  }
  auto domain = domain_of(p, flags, p.value("dim", std::size_t{1}));
  auto e = io::read_set_oracle(set_json(p, flags), domain.dim);
  auto r = is_jordan(*e, domain, jordan_options(p, flags));
  return {io::write_jordan(r), status_code(r.status)};
}

Outcome run_measure(const json& p, const Flags& flags) {
  if (p.contains("fam")) {
    auto fam = io::read_fam(p.at("fam"));
    auto e = io::read_set(need(p, "set"), fam.ground());
    return {{{"outer", io::write_rational(outer_measure(e, fam))}, {"inner", io::write_rational(inner_measure(e, fam))}}};
  }
  auto domain = domain_of(p, flags, p.value("dim", std::size_t{1}));
  auto e = io::read_set_oracle(set_json(p, flags), domain.dim);
  auto r = is_jordan(*e, domain, jordan_options(p, flags));
  json out = io::write_jordan(r);
  return {{{"inner", out["inner"]}, {"outer", out["outer"]}, {"cells", r.cells}}};
}

Outcome run_cantor(const json& p, const Flags& flags) {
  json out = json::object();
  if (p.contains("cylinders")) {
    std::vector<std::string> strs = p.at("cylinders").get<std::vector<std::string>>();
    json rows = json::array();
    for (const auto& s : strs) {
      auto [a, b] = iota2_image(s);
      rows.push_back({{"cylinder", s},
                      {"measure", io::write_rational(cylinder_measure(s))},
                      {"image", {io::write_rational(a), io::write_rational(b)}}});
    }
    CantorClopen c(strs);
    out["cylinders"] = rows;
    out["union"] = {{"canonical", c.cylinders()}, {"measure", io::write_rational(clopen_measure(c))}};
    if (flags.fn.empty() && !p.contains("function")) return {out};
  }
  auto g = io::read_function(function_json(p, flags), 1);
  CantorOptions opts;
  opts.eps = real_eps(p, flags, 1e-4);
  opts.max_depth = p.value("depth", flags.depth);
  auto r = cantor_integrate(*g, opts);
  out["integral"] = io::write_report(r);
  auto lv = lebesgue_vitali_check(*g, opts.eps, opts.max_depth);
  json profile = json::array();
  for (const auto& row : lv.profile) {
    profile.push_back({{"threshold", io::write_real(row.threshold)},
                       {"depth", row.depth},
                       {"measure", io::write_rational(row.measure)},
                       {"certified", io::write_rational(row.certified)}});
  }
  out["lebesgue_vitali"] = {{"verdict", to_string(lv.verdict)}, {"profile", profile}};
  return {out, status_code(r.status)};
}

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--in", f.in, "Problem file (JSON); - reads stdin");
  sub->add_option("--eps", f.eps, "Tolerance: p/q for exact modules, decimal for quadrature");
  sub->add_option("--depth", f.depth, "Cylinder depth budget");
  sub->add_option("--budget", f.budget, "Cell budget for refinement");
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  sub->add_option("--seed", f.seed, "Seed for randomized generators (solvers are deterministic)");
  sub->add_option("--fn", f.fn, "Function DSL as JSON");
  sub->add_option("--box", f.box, "Domain as [[lo,hi],...]");
  sub->add_option("--set", f.set, "Set DSL as JSON, or a fixture name");
  sub->add_option("--strategy", f.strategy, "adaptive or uniform")->check(CLI::IsMember({"adaptive", "uniform"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"famkit: finitely additive measures, extensions and integrals"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::pair<std::string, Handler>> commands = {
      {"algebra", {"Atoms of a generated field of sets", run_algebra}},
      {"fam-check", {"Validate a fam and evaluate sets", run_fam_check}},
      {"classify", {"Probability, freeness, uap and uniform support", run_classify}},
      {"approx", {"Uniform finite approximation on a partition", run_approx}},
      {"extend", {"Extend a partial assignment to a fam", run_extend}},
      {"compatible", {"Decide whether two fams have a common extension", run_compatible}},
      {"amalgamate", {"Common extension of two fams", run_amalgamate}},
      {"extend-filter", {"Extension giving a filter full measure", run_extend_filter}},
      {"three-way", {"Common extension of two fams and a filter", run_three_way}},
      {"constrain", {"Fam meeting value or integral constraints", run_constrain}},
      {"integrate", {"Integral on a finite fam or a box", run_integrate}},
      {"jordan", {"Jordan measurability", run_jordan}},
      {"measure", {"Inner and outer measure", run_measure}},
      {"cantor", {"Cantor-space integral and oscillation profile", run_cantor}},
  };
  for (const auto& [name, entry] : commands) add_flags(app.add_subcommand(name, entry.first), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "famkit: " << e.what() << "\n" << app.help();
    return kInput;
  }
  auto* sub = app.get_subcommands().front();
  std::string name = sub->get_name();
  std::setlocale(LC_ALL, "C");
  Outcome out;
  try {
    auto problem = load_problem(flags, name);
    out = commands.at(name).second(problem, flags);
  } catch (const json::exception& e) {
    std::cerr << "famkit: malformed JSON: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "famkit: " << e.what() << "\n";
    return kInput;
  }
  out.report["command"] = name;
  if (flags.format == "table") {
    std::cout << io::as_table(out.report);
  } else {
    std::cout << out.report.dump(2) << "\n";
  }
  return out.code;
}
