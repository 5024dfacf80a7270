#pragma once

// Level-zero f-periodic flows presented as Frobenius-periodic modules: a rank
// r module with an invertible twist matrix A giving the sigma^f-semilinear
// map psi, psi(1 (x) e_j) = sum_i e_i A_ij. Fixed vectors solve
// sigma^f(x) = A^{-1} x. Point case: base W_n(F_q). Curve case: base
// W_n(F_q)[t, t^{-1}] with a chosen Frobenius lift.

#include <optional>
#include <variant>

#include "wittflow/connections.hpp"

namespace wittflow {

struct PointBase {
    WittRingPtr ring;
    // degree over F_p of the declared field of definition (divides m);
    // coefficients of A must be sigma^{base_degree}-fixed
    i64 base_degree;
};

struct CurveBase {
    LaurentAlgebraPtr algebra;
    FrobeniusLift lift;
    i64 base_degree;
};

class PeriodicFlow {
public:
    static PeriodicFlow point(WittRingPtr ring, i64 period, WittMat A,
                              std::optional<i64> base_degree = std::nullopt);
    static PeriodicFlow curve(LaurentAlgebraPtr alg, FrobeniusLift lift, i64 period, LaurentMat A,
                              std::optional<i64> base_degree = std::nullopt);

    bool is_point() const { return std::holds_alternative<PointBase>(base_); }
    const PointBase& point_base() const { return std::get<PointBase>(base_); }
    const CurveBase& curve_base() const { return std::get<CurveBase>(base_); }
    const WittRingPtr& witt_ring() const;  // coefficient ring in both cases

    i64 rank() const { return rank_; }
    i64 period() const { return period_; }
    i64 level() const;  // n
    const WittMat& A_point() const { return std::get<WittMat>(A_); }
    const LaurentMat& A_curve() const { return std::get<LaurentMat>(A_); }

    // entry-wise application of the period-many Frobenius (sigma^f or F^f)
    // used by the twisted-conjugacy relation
    WittMat twist_point(const WittMat& U) const;
    LaurentMat twist_curve(const LaurentMat& U) const;

    bool operator==(const PeriodicFlow& o) const;

private:
    std::variant<PointBase, CurveBase> base_;
    i64 rank_, period_;
    std::variant<WittMat, LaurentMat> A_;
};

// The shift: next term of the flow's chain; matrix becomes phi(A)
// (entry-wise sigma in the point case, entry-wise F in the curve case).
PeriodicFlow shift(const PeriodicFlow& flow);
PeriodicFlow shift_pow(const PeriodicFlow& flow, i64 k);

// (1 (x) sigma)^* pullback along a coefficient-field automorphism
// sigma_0^{j}; j must be a multiple of the declared base degree.
PeriodicFlow galois_pullback(const PeriodicFlow& flow, i64 sigma_power);

// Reduction mod p^{n'} (tower compatibility).
PeriodicFlow reduce_flow(const PeriodicFlow& flow, i64 target_level);

// Tensor product of point flows with equal period.
PeriodicFlow tensor_point_flows(const PeriodicFlow& a, const PeriodicFlow& b);

struct FlowIsoWitness {
    // A2 = U^{-1} A1 phi^f(U)
    std::variant<WittMat, LaurentMat> U;
};

struct IsoResult {
    enum class Verdict { kIsomorphic, kNotIsomorphic, kInconclusive };
    Verdict verdict;
    std::optional<FlowIsoWitness> witness;
    std::string detail;
};

struct IsoOptions {
    i64 combo_budget = 1 << 20;    // point case: mod-p combination cap
    i64 monomial_degree = 6;       // curve case: |t-degree| of U
    i64 unit_budget = 200000;      // curve case: constant-part candidates
};

// Decision procedure for isomorphism of flows. Point case is complete; curve
// case searches unit-monomial U (sound, may return Inconclusive).
IsoResult iso_flows(const PeriodicFlow& a, const PeriodicFlow& b, const IsoOptions& opts = {});

// verify a witness exactly
bool check_iso_witness(const PeriodicFlow& a, const PeriodicFlow& b, const FlowIsoWitness& w);

// The expanded Higgs-de Rham chain. In the curve case each H_i carries the
// canonical connection of its Frobenius pullback; flat-basis triviality is a
// lemma-level invariant that tests exercise through flat_sections.
struct DiagramChain {
    i64 period;
    std::vector<ModuleWithConnection> de_rham_terms;  // curve case, f entries
    PeriodicFlow flow;                                // closing data
};

DiagramChain expand_diagram(const PeriodicFlow& flow);

// Canonical connection of a curve flow (the unique one making psi
// horizontal).
ModuleWithConnection flow_connection(const PeriodicFlow& flow);

}  // namespace wittflow
