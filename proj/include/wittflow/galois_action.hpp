#pragma once

// The Galois calculus on the representation side: the coefficient twist
// sigma o rho, the geometric twist rho o sigma~ (realized per cover family),
// and the verifiers tying them to pullback and shift on the flow side.

#include "wittflow/deformations.hpp"

namespace wittflow {

struct GaloisTwistSpec {
    i64 q_degree = 1;  // m with q = p^m; sigma is the q-power Frobenius
    i64 N = 1;         // any N with N f - m >= 0
};

// entry-wise sigma_0^j on the representation's values
ZhatRep rep_coeff_twist(const ZhatRep& rep, i64 j);
CoverRep rep_coeff_twist(const CoverRep& rep, i64 j);

// rho o sigma~ for the q-power Frobenius: Kummer generators get relabeled
// zeta -> zeta^q (exponent multiplies by q), Artin-Schreier shifts are fixed
CoverRep rep_geo_twist(const CoverRep& rep, i64 q);

struct RightActionReport {
    bool identity_pullback = false;  // flow(^sigma rho^sigma) iso (1 (x) sigma)^* flow
    bool identity_shift = false;     // flow(^{sigma_0} rho) iso shift(flow)
    std::string detail;
};

// matched pair produced by the correspondence; the point overload recomputes
// the representation internally
RightActionReport verify_right_action_point(const PeriodicFlow& flow, const KatzOptions& opts = {});
RightActionReport verify_right_action_curve(const PeriodicFlow& flow, const KatzOptions& opts = {});

struct CorollaryReport {
    bool iso = false;       // flow(rho o sigma~) iso shift^{Nf-m}(pullback flow)
    bool n_stable = false;  // the verdict agrees for every tested N
    std::vector<i64> tested_N;
    std::string detail;
};

CorollaryReport verify_main_corollary_point(const PeriodicFlow& flow, std::vector<i64> Ns = {},
                                            const KatzOptions& opts = {});
CorollaryReport verify_main_corollary_curve(const PeriodicFlow& flow, std::vector<i64> Ns = {},
                                            const KatzOptions& opts = {});

}  // namespace wittflow
