#pragma once

// Both directions of the correspondence between periodic flows and
// representations of the fundamental group: flows to representations (fixed
// points of the twisted Frobenius with their Galois action) and
// representations to flows (descent along a trivializing cover), plus the
// twisted-conjugacy classification that the equivalence makes equinumerous.

#include <optional>

#include "wittflow/lang_solver.hpp"

namespace wittflow {

// Representation of the full fundamental group of Spec F_q (topologically
// generated by the q-power Frobenius) on a free module over W_n(F_{p^f}).
struct ZhatRep {
    WittRingPtr scalars;  // W_n(F_{p^f})
    i64 q_degree = 1;     // m, with q = p^m
    WittMat P;            // image of Frob_q
};

// Representation attached to a connected Galois cover of the punctured line:
// one matrix per cover-group layer generator plus the arithmetic Frobenius.
struct CoverRep {
    EtaleCoverSpec spec;
    WittRingPtr scalars;
    i64 q_degree = 1;
    std::vector<WittMat> geo_gens;
    WittMat arith;
};

// Checks the finite group relations (generator orders, commutation, and the
// arithmetic-geometric semidirect relations). Throws InvalidArgument.
void validate_cover_rep(const CoverRep& rep);

struct KatzOptions {
    // explicit point-case path allowed up to this ambient degree; beyond it
    // the conjugacy-class route is taken
    i64 explicit_ambient_cap = 48;
    i64 order_cap = 10000;        // multiplicative order of P
    i64 kummer_search_max = 12;   // trivializing-cover search bound
    CurveSolverPolicy curve;
};

// ---------------------------------------------------------------------------
// flows -> representations

ZhatRep flow_to_rep_point(const PeriodicFlow& flow, const KatzOptions& opts = {});

// also returns the solution module when the explicit path ran
struct PointRepResult {
    ZhatRep rep;
    std::optional<SolutionModule> module;
};
PointRepResult flow_to_rep_point_full(const PeriodicFlow& flow, const KatzOptions& opts = {});

struct CurveRepResult {
    CoverRep rep;
    CurveSolutionModule module;
};
CurveRepResult flow_to_rep_curve(const PeriodicFlow& flow,
                                 const std::optional<EtaleCoverSpec>& cover_hint = std::nullopt,
                                 const KatzOptions& opts = {});

// ---------------------------------------------------------------------------
// representations -> flows

PeriodicFlow rep_to_flow(const ZhatRep& rep, const KatzOptions& opts = {});

// curve case: the flow is produced over the given level-n base with lift F
PeriodicFlow rep_to_flow_cover(const CoverRep& rep, const FrobeniusLift& F,
                               const KatzOptions& opts = {});

// ---------------------------------------------------------------------------
// conjugacy utilities over the scalar ring

// complete decision of conjugacy U P2 = P1 U with U invertible
std::optional<WittMat> reps_conjugate(const WittMat& P1, const WittMat& P2);

// canonical invariants of a GL_r conjugacy class over a Galois ring (r <= 2,
// n <= 2), used to compare classes across rings through embeddings
std::vector<i64> conjugacy_invariants(const WittMat& X);

// descend the class of X in GL_r(W_n(F_q)) to a representative over the
// scalar subring W_n(F_{p^f}), assuming the char-poly data is sigma^f-fixed
// (which the twisted product construction guarantees); verified internally
WittMat descend_conjugacy_class(const WittMat& X, const WittRingPtr& scalars);

// sigma^{f(k-1)}(B) ... sigma^f(B) B
WittMat twisted_product(const WittMat& B, i64 period, i64 k);

// ---------------------------------------------------------------------------
// classification

struct ClassifyResult {
    i64 flow_classes = 0;
    i64 rep_classes = 0;
    bool match = false;
};

struct ClassifyOptions {
    i64 group_budget = 200000;  // maximum |GL_r| enumerated
};

ClassifyResult classify_point_case(i64 p, i64 m, i64 n, i64 r, i64 f,
                                   const ClassifyOptions& opts = {});

}  // namespace wittflow
