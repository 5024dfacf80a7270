#pragma once

// The iterative solver for the Frobenius fixed-point equation
// sigma^f(x) = B x over finite extensions of the coefficient ring, and its
// curve-case variant over a lifted etale cover. Mod p the equation is the
// Kummer equation x^{p^f} = B_1 x; each further p-adic digit is an
// Artin-Schreier correction y^{p^f} - B_1 y = z with p^i z = B x' - sigma^f(x').

#include "wittflow/covers.hpp"
#include "wittflow/flows.hpp"

namespace wittflow {

// ---------------------------------------------------------------------------
// mod-p steps (exposed with twist 1 by default: sigma = p-power map)

struct KummerStepResult {
    // F_p-basis of the solution set of x^{(p^twist)} = B1 x in ambient^r
    std::vector<std::vector<FqElem>> basis;
};

KummerStepResult solve_kummer_step(const Mat<FqElem>& B1, const FqFieldPtr& ambient, i64 twist = 1);

struct ArtinSchreierStepResult {
    bool solvable = false;  // false means NoSolutionInAmbient
    std::vector<FqElem> particular;
    std::vector<std::vector<FqElem>> kernel;
};

ArtinSchreierStepResult solve_artin_schreier_step(const Mat<FqElem>& B1,
                                                  const std::vector<FqElem>& z,
                                                  const FqFieldPtr& ambient, i64 twist = 1);

// ---------------------------------------------------------------------------
// full point-case solver

struct SolverPolicy {
    i64 max_ambient_degree = 512;
    i64 twisted_order_cap = 20000;
    // deterministic lift choice; kOffset exists to witness lift-independence
    enum class LiftChoice { kMinimal, kOffset } lift_choice = LiftChoice::kMinimal;
};

struct SolutionModule {
    WittRingPtr ambient;      // W_n(F_{p^M})
    WittRingPtr scalars;      // W_n(F_{p^f})
    i64 rank = 0, period = 0;
    i64 ambient_degree = 0;   // M
    // W_n(F_{p^f})-basis of the solution module; each basis vector is a
    // length-rank vector over the ambient
    std::vector<std::vector<WittElem>> basis;
    // matrix of the q-power Frobenius sigma^m on the basis, entries in the
    // scalar ring: sigma^m(v_j) = sum_i v_i P_ij
    WittMat frobq;
    i64 log_cardinality = 0;  // log_p |module| = n f r on success
    // Z/p^n-span of all solutions, for module comparisons in tests
    std::shared_ptr<WittSpan> span;
};

// Solve sigma^f(x) = B x with B invertible over W_n(F_q); the ambient degree
// is computed from the twisted order of B (smallest k with
// sigma^{f(k-1)}(B)...sigma^f(B) B = I), M = lcm(f k, m).
SolutionModule solve_frobenius_fixed(const WittMat& B, i64 period, const SolverPolicy& policy = {});

// ---------------------------------------------------------------------------
// curve case: solutions in (cover ring) x W_n(F_{p^M}) with bounded t-window

struct CurveSolverPolicy {
    i64 max_ambient_degree = 16;
    i64 window = 8;        // |t-exponent| bound for solution support
    i64 max_window = 32;
    SolverPolicy::LiftChoice lift_choice = SolverPolicy::LiftChoice::kMinimal;
};

struct CurveSolutionModule {
    LiftedCoverPtr cover;  // over the extended constant ring W_n(F_{p^M})
    WittRingPtr scalars;   // W_n(F_{p^f})
    i64 rank = 0, period = 0;
    i64 ambient_degree = 0;
    std::vector<std::vector<CoverElem>> basis;  // scalar-ring basis
    // action matrices over the scalar ring: one per cover group generator
    // (layer order), then the arithmetic Frobenius sigma^m
    std::vector<WittMat> galois_generators;
    WittMat arith_frobenius;
    i64 log_cardinality = 0;
    bool complete = false;  // cardinality reached p^{n f r}
};

// Solve F_Y^f(x) = B x over the given cover with constants extended to
// W_n(F_{p^M}); B has entries in the cover's base Laurent algebra.
CurveSolutionModule solve_frobenius_fixed_curve(const EtaleCoverSpec& spec,
                                                const FrobeniusLift& base_lift,
                                                const LaurentMat& B, i64 period,
                                                const CurveSolverPolicy& policy = {});

// Extend a level-1 cover spec to a larger constant field (embedding the
// layer data and the Kummer root).
EtaleCoverSpec extend_spec_constants(const EtaleCoverSpec& spec, const LaurentAlgebraPtr& big_base1);

}  // namespace wittflow
