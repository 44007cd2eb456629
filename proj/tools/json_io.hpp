#pragma once

#include "famkit/approx.hpp"
#include "famkit/boolalg.hpp"
#include "famkit/cantor.hpp"
#include "famkit/extend.hpp"
#include "famkit/fam.hpp"
#include "famkit/integrate.hpp"
#include "famkit/range_oracle.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace famkit::io {

using nlohmann::json;

// ---- reading -----------------------------------------------------------------

/// "p/q", "p", a decimal string, or a JSON integer.
Rational read_rational(const json& j);
/// A JSON number or a decimal string.
double read_real(const json& j);

/// Integer n (labels "0".."n-1") or an array of distinct label strings.
GroundSet read_ground(const json& j);
/// Array of labels or indices.
SetElem read_set(const json& j, const GroundSet& ground);
std::vector<SetElem> read_sets(const json& j, const GroundSet& ground);
/// {"atoms": [...]} or {"generators": [...]}; absent means the power set.
Algebra read_algebra(const json* j, const GroundSet& ground);
/// {"ground", "algebra", "weights"} or {"ground", "values"}.
Fam read_fam(const json& j);
/// Cells as sets; absent means the atom partition.
Partition read_partition(const json* j, const Algebra& algebra);
/// {"label": "p/q", ...} with missing labels 0, or an array aligned with the ground set.
ExactFn read_table(const json& j, const GroundSet& ground);
PartialAssignment read_assignment(const json& j, const GroundSet& ground);
/// {"between": [lo, hi]} or {"one_of": [...]}.
TargetSet read_target(const json& j);

/// [[lo, hi], ...] per axis.
Box read_box(const json& j);
/// Function DSL for the box backend.
OraclePtr read_function(const json& j, std::size_t dim);
/// Set DSL for the box backend.
SetPtr read_set_oracle(const json& j, std::size_t dim);

// ---- writing -----------------------------------------------------------------

/// Canonical "p/q" string.
json write_rational(const Rational& r);
/// Shortest round-trip decimal string, locale independent.
json write_real(double x);
json write_set(const SetElem& s, const GroundSet& ground);
std::string atom_key(const SetElem& atom, const GroundSet& ground);
json write_fam(const Fam& fam);
json write_certificate(const Certificate& c, const GroundSet& ground);
json write_extension(const ExtensionResult& r, const GroundSet& ground);
json write_exact_integral(const ExactIntegral& r);
json write_report(const IntegralReport& r);
json write_jordan(const JordanReport& r);

/// Flattened "key: value" lines for --format table.
std::string as_table(const json& j);

}  // namespace famkit::io
