#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <string>

#include "adic/diagram.hpp"
#include "adic/extension.hpp"
#include "adic/measure.hpp"
#include "adic/oracle.hpp"
#include "adic/subdiagram.hpp"

namespace adic {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing. All vertex indices are 0-based; rationals are "p/q" strings or
// integers; family parameters are expression strings in n, optionally
// {"period": P, "cases": [...], "valid_from": N} with each case evaluated at
// the block index m = n div P for levels n ≡ r (mod P).

SymbolicSeq parse_symbolic_seq(const json& j);
json symbolic_seq_to_json(const SymbolicSeq& seq);

DiagramSpec parse_diagram(const json& j);
json diagram_to_json(const DiagramSpec& spec);

/// Loads a diagram spec from a JSON file. Throws Error("io") /
/// Error("bad-json") with position information.
DiagramSpec load_diagram(const std::string& path);

/// Subdiagram document: {"kind":"vertex"|"edge", "parent": <inline spec or
/// file path string>, ...}. The loader resolves parent path strings.
Subdiagram parse_subdiagram(const json& j,
                            const std::function<DiagramSpec(const std::string&)>& load_parent);
Subdiagram load_subdiagram(const std::string& path);

/// Measure configuration resolved against a diagram:
///   {"kind":"canonical-ecs"} | {"kind":"stationary-pf","tol":1e-9}
///   | {"kind":"random","seed":7} | {"kind":"extreme","vertex":0}
///   | {"kind":"explicit","levels":[["1/2","1/2"], ...]}
MeasureFamily resolve_measure(const json& j, const DiagramSpec& spec, long depth);

json parse_json_text(const std::string& text);  // Error("bad-json") with byte position
json load_json_file(const std::string& path);

// ---------------------------------------------------------------------------
// Serialization of reports; deterministic (nlohmann objects order keys).

json to_json(const ValidationReport& rep);
json to_json(const SubValidationReport& rep);
json to_json(const SumCheckReport& rep);
json to_json(const StochasticMatrix& m);
json to_json(const MeasureFamily& fam);
json to_json(const SimplexState& s);
json to_json(const ErgodicCountReport& rep);
json to_json(const Rank2Report& rep);
json to_json(const PerronResult& res, double tol);
json to_json(const SubspaceMeasureReport& rep);
json to_json(const ThinnessReport& rep);
json to_json(const CriterionRow& row);
json to_json(const ExtensionReport& rep);
json to_json(const ErsEcsReport& rep);
json to_json(const OdometerCheckReport& rep);
json to_json(const WitnessReport& rep);

json heights_to_json(const std::vector<Int>& h);
json rats_to_json(const std::vector<Rat>& xs);

/// CSV block with exact and 17-significant-digit decimal columns:
/// level,term,term_decimal,partial_sum,partial_sum_decimal
std::string series_csv(const std::vector<Rat>& terms, const std::vector<Rat>& partial_sums,
                       long first_level = 1);

}  // namespace adic
