#pragma once

#include <string>

#include <json.hpp>

#include "logicbench/bisimulation.hpp"
#include "logicbench/fo.hpp"
#include "logicbench/formula.hpp"
#include "logicbench/horn.hpp"
#include "logicbench/resolution.hpp"
#include "logicbench/semantics.hpp"
#include "logicbench/tableau.hpp"
#include "logicbench/verdict.hpp"

// Wire shapes shared by the service, the CLI and the exercise files.
// Formulas, terms, literals and clauses travel as their ASCII rendering.
// Decoders throw Error("schema_violation") with a JSON path as locus.
namespace logicbench {

using Json = nlohmann::ordered_json;

// Small helpers for decoders; `path` is the JSON path of `j`.
[[noreturn]] void schema_error(const std::string& path, const std::string& message);
const Json& require(const Json& j, const std::string& key, const std::string& path);
std::string expect_string(const Json& j, const std::string& path);
bool expect_bool(const Json& j, const std::string& path);
long long expect_int(const Json& j, const std::string& path);
const Json& expect_array(const Json& j, const std::string& path);
const Json& expect_object(const Json& j, const std::string& path);

Json encode(const Formula& f);
Json encode(const FoFormula& f);
Json encode(const Clause& c);
Json encode(const ClauseSet& s);
Json encode(const Substitution& s);
Json encode(const Valuation& v);
Json encode(const KripkeStructure& k);
Json encode(const ColoredGraph& g);
Json encode(const NodeSet& s);
Json encode(const TruthTable& t);
Json encode(const EvaluationTable& t);
Json encode(const StepVerdict& v);
Json encode(const EvalTrace& t);
Json encode(const ModelVerdict& v);
Json encode(const Candidate& c);
Json encode(const Tableau& t);
Json encode(const ResolutionGraph& g);
Json encode(const HornMarkingState& s);
Json encode(const BisimRelation& r);
Json encode(const BisimulationState& s);

// Parse errors inside strings are reported as schema violations at `path`.
Formula decode_formula(const Json& j, Logic logic, const std::string& path = "$");
FoFormula decode_fo_formula(const Json& j, const std::string& path = "$");
Literal decode_literal(const Json& j, const std::string& path = "$");
Clause decode_clause(const Json& j, const std::string& path = "$");
ClauseSet decode_clause_set(const Json& j, const std::string& path = "$");
Substitution decode_substitution(const Json& j, const std::string& path = "$");
Valuation decode_valuation(const Json& j, const std::string& path = "$");
KripkeStructure decode_kripke(const Json& j, const std::string& path = "$");
ColoredGraph decode_graph(const Json& j, const std::string& path = "$");
NodeSet decode_node_set(const Json& j, const std::string& path = "$");
TruthTable decode_truth_table(const Json& j, const std::string& path = "$");
EvaluationTable decode_evaluation_table(const Json& j, const std::string& path = "$");
BisimRelation decode_relation(const Json& j, const std::string& path = "$");
Tableau decode_tableau(const Json& j, const std::string& path = "$");
ResolutionGraph decode_resolution_graph(const Json& j, const std::string& path = "$");
HornMarkingState decode_horn_state(const Json& j, const std::string& path = "$");
BisimulationState decode_bisimulation_state(const Json& j, const std::string& path = "$");

}  // namespace logicbench
