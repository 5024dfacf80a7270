#pragma once

// JSON encodings of every public object. Numbers are exact small integers;
// ring elements are always coefficient arrays (constant term first); keys are
// emitted in a fixed order so identical requests produce byte-identical
// responses.

#include "json.hpp"

#include "wittflow/galois_action.hpp"

namespace wittflow {

using Json = nlohmann::ordered_json;

// fields and rings
Json to_json(const FqFieldPtr& f);
Json to_json(const FqElem& x);
FqFieldPtr field_from_json(const Json& j);
FqElem fq_elem_from_json(const Json& j, const FqFieldPtr& f);

Json to_json(const WittRingPtr& r);
Json to_json(const WittElem& x);
WittRingPtr ring_from_json(const Json& j);
WittElem witt_elem_from_json(const Json& j, const WittRingPtr& r);

// laurent layer
Json to_json(const LaurentElem& x);
LaurentElem laurent_from_json(const Json& j, const LaurentAlgebraPtr& alg);
Json to_json(const FrobeniusLift& F);

// matrices
Json witt_mat_to_json(const WittMat& A);
WittMat witt_mat_from_json(const Json& j, const WittRingPtr& r);
Json laurent_mat_to_json(const LaurentMat& A);
LaurentMat laurent_mat_from_json(const Json& j, const LaurentAlgebraPtr& alg);

// covers
Json to_json(const EtaleCoverSpec& spec);
EtaleCoverSpec cover_spec_from_json(const Json& j);
Json to_json(const LiftedCoverPtr& cover);

// flows and witnesses
Json to_json(const PeriodicFlow& flow);
PeriodicFlow flow_from_json(const Json& j);
Json to_json(const FlowIsoWitness& w);

// representations
Json to_json(const ZhatRep& rep);
ZhatRep zhat_from_json(const Json& j);
Json to_json(const CoverRep& rep);
CoverRep cover_rep_from_json(const Json& j);

// reports
Json to_json(const SolutionModule& module);
Json to_json(const ClassifyResult& res);
Json to_json(const IsoResult& res);
Json to_json(const TorsorReport& rep);
Json to_json(const AutReport& rep);
Json to_json(const ObstructionReport& rep, const FiniteGroup* group);
Json to_json(const Beta0Class& cls);
Json to_json(const LesReport& rep);
Json to_json(const RightActionReport& rep);
Json to_json(const CorollaryReport& rep);

}  // namespace wittflow
