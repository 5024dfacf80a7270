#pragma once

// Deformation calculus for representations over Z/p^n -> Z/p^{n+1}:
// obstruction 2-cocycles, the H^1-torsor of deformation classes,
// automorphism groups, and the connecting map beta0 of the Artin-Schreier
// sequence 0 -> End(L) -> End(E) --(1-Phi)--> End(E) -> 0 together with the
// long-exact-sequence checks at computable instances.

#include "wittflow/katz.hpp"

namespace wittflow {

// ---------------------------------------------------------------------------
// small finite groups (abelian products are all the catalogue needs)

struct FiniteGroup {
    i64 order = 1;
    std::vector<std::vector<i64>> mul;  // mul[a][b]
    std::vector<i64> inverse;
    i64 identity = 0;

    static FiniteGroup abelian(const std::vector<i64>& cycle_orders);
    std::vector<i64> generators;  // indices of the chosen generators
};

// representation of a finite group over W_n(F_p) = Z/p^n, one matrix per
// element
struct FiniteGroupRep {
    FiniteGroup group;
    WittRingPtr ring;  // m = 1
    std::vector<WittMat> images;
};

FiniteGroupRep make_group_rep(const FiniteGroup& g, const WittRingPtr& ring,
                              const std::vector<WittMat>& generator_images);

// ---------------------------------------------------------------------------
// group cohomology of ad(rho mod p) in degrees 0..2 over F_p

struct AdCohomology {
    i64 h0 = 0, h1 = 0, h2 = 0;          // F_p-dimensions
    i64 dim_z1 = 0, dim_b1 = 0, dim_z2 = 0, dim_b2 = 0;
};

AdCohomology ad_cohomology(const FiniteGroupRep& rep);

// ---------------------------------------------------------------------------
// obstruction

struct ObstructionReport {
    bool zero = false;
    // when zero: an explicit multiplicative lift over Z/p^{n+1}
    std::vector<WittMat> lift;    // per group element (or the single P-lift)
    // the 2-cocycle of the minimal entry-wise lift, flattened tables
    std::vector<WittMat> cocycle; // [g*order + h] entries over Z/p (as 0/..p-1)
};

ObstructionReport obstruction_group(const FiniteGroupRep& rep);
// Zhat shape: always zero, with the entry-wise lift certificate
ObstructionReport obstruction_zhat(const ZhatRep& rep);

// ---------------------------------------------------------------------------
// deformation torsor

struct TorsorReport {
    i64 deformation_classes = 0;  // number of classes of lifts
    i64 h1_size = 0;              // |H^1 (x) a|
    bool torsor_ok = false;       // free + transitive action verified
};

TorsorReport deformation_torsor_group(const FiniteGroupRep& rep);
TorsorReport deformation_torsor_zhat(const ZhatRep& rep);

// ---------------------------------------------------------------------------
// automorphisms of a deformation

struct AutReport {
    i64 group_size = 0;  // |1 + p^n T commuting with the image|
    i64 h0_dim = 0;      // dim H^0(Pi, ad) over F_p
    bool identified = false;
};

AutReport automorphism_group_zhat(const ZhatRep& rep_at_level_n_plus_1);
AutReport automorphism_group_group(const FiniteGroupRep& rep_at_level_n_plus_1);

// ---------------------------------------------------------------------------
// the Frobenius endomorphism module of a mod-p point flow (period 1) and the
// connecting map beta0

// sign convention of the connecting map, pinned by the w_Gal = beta0(g)
// identity on the worked instance
inline constexpr i64 kBeta0Sign = -1;

struct PointEnd {
    WittRingPtr R1;  // W_1(F_q)
    WittMat Abar;    // invertible, the flow's twist matrix mod p

    // Phi(H) = Abar sigma(H) Abar^{-1}
    Mat<FqElem> phi(const Mat<FqElem>& H) const;
};

PointEnd point_end_of_flow(const PeriodicFlow& flow);

struct Beta0Class {
    i64 extension_degree = 1;     // s with h in M_r(F_{q^s})
    Mat<FqElem> h;                // solves Phi(h) - h = sign * g
    Mat<FqElem> crossed_value;    // sigma_q(h) - h, a Phi-fixed matrix
    std::vector<i64> ad_coords;   // the class in H^1(pi_1, ad) coordinates
    bool zero = false;
};

Beta0Class beta0_point(const PointEnd& end, const Mat<FqElem>& g, i64 max_degree = 64);

// difference class of two deformations of the same Zhat representation, in
// the same H^1 coordinates as beta0
std::vector<i64> w_gal_zhat(const ZhatRep& base, const WittMat& lift1, const WittMat& lift2);

// ---------------------------------------------------------------------------
// long exact sequence report (point case)

struct LesReport {
    i64 dim_h0_L = 0;        // ker(1 - Phi) on M_r(F_q)
    i64 dim_h0_E = 0;        // r^2 m
    i64 dim_im_one_minus_phi = 0;
    i64 dim_h1_pi1 = 0;      // coker of the Frobenius action on ad
    i64 rank_beta0 = 0;
    bool exact_at_h0 = false;      // ker(1-Phi) = im(alpha0)
    bool exact_at_h0_second = false;  // ker(beta0) = im(1-Phi)
    bool exact_at_h1 = false;      // im(beta0) = ker(alpha1) = everything
    bool surjectivity_witnessed = false;  // 1-Phi onto after base change
    i64 surjectivity_max_degree = 0;
};

LesReport les_check_point(const PeriodicFlow& flow_level1, i64 sample_budget = 64);

// canonical-isomorphism check: Phi-fixed global endomorphisms match the
// endomorphisms of the local system (through the solution module)
bool phi_fixed_matches_local_system_end(const PeriodicFlow& flow_level1);

// ---------------------------------------------------------------------------
// degenerate-case identity reports with certificates

struct DegenerateIdentityReport {
    bool ob_rho_zero = false;   // witnessed by an explicit lift
    bool ob_E_zero = false;     // witnessed by the free-module lift
    bool alpha2_identity = false;  // alpha^2(ob(rho)) = ob(E) in the zero group
    bool v_identity = false;       // v' = v + Phi(w) - w, all terms in H^1 = 0
};

DegenerateIdentityReport degenerate_identities_zhat(const ZhatRep& rep);

}  // namespace wittflow
