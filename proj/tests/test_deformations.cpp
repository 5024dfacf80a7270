#include "doctest.h"
#include "wittflow/deformations.hpp"

using namespace wittflow;

namespace {

// brute-force lift-existence oracle for small group reps: does ANY
// multiplicative lift over Z/p^{n+1} exist?
bool lift_exists_brute_force(const FiniteGroupRep& rep) {
    auto ring = rep.ring;
    const i64 p = ring->p(), n = ring->n();
    auto up = WittRing::create(p, n + 1, 1);
    const i64 r = rep.images[0].rows();
    const i64 rr = r * r;
    i64 pn = pow_i64(p, n);
    // lifts of each generator image: p^{rr} choices each
    const auto& gens = rep.group.generators;
    i64 total = 1;
    for (size_t i = 0; i < gens.size(); ++i) total *= pow_i64(p, rr);
    for (i64 mask = 0; mask < total; ++mask) {
        i64 rem = mask;
        std::vector<WittMat> gimgs;
        for (i64 gidx : gens) {
            WittMat L = rep.images[gidx].map(
                [&](const WittElem& x) { return up->from_int(x.coeffs()[0]); });
            for (i64 k = 0; k < rr; ++k) {
                i64 d = rem % p;
                rem /= p;
                L.at(k / r, k % r) = L.at(k / r, k % r) + up->from_int(d * pn);
            }
            gimgs.push_back(L);
        }
        try {
            make_group_rep(rep.group, up, gimgs);
            return true;
        } catch (const InvalidArgument&) {
        }
    }
    return false;
}

}  // namespace

TEST_CASE("obstruction: zhat shape always lifts with certificate") {
    auto R = WittRing::create(2, 2, 1);
    ZhatRep rep{R, 1, WittMat(1, 1, R->from_int(3))};
    auto ob = obstruction_zhat(rep);
    CHECK(ob.zero);
    REQUIRE(ob.lift.size() == 1);
    CHECK(ob.lift[0].det().is_unit());
}

TEST_CASE("obstruction: trivial rank-1 rep over a finite quotient is unobstructed") {
    auto R = WittRing::create(2, 1, 1);
    auto G = FiniteGroup::abelian({2});
    auto rep = make_group_rep(G, R, {witt_identity(1, R)});
    auto ob = obstruction_group(rep);
    CHECK(ob.zero);
    // the certified lift is a homomorphism (checked internally), and matches
    // the brute-force oracle
    CHECK(lift_exists_brute_force(rep));
}

TEST_CASE("obstruction agrees with the brute-force lift search on small groups") {
    // sweep: groups Z/2, Z/4, Z/2 x Z/2, Z/3; p in {2, 3}; r = 1; n = 1
    std::vector<std::vector<i64>> groups = {{2}, {4}, {2, 2}, {3}, {8}};
    for (i64 p : {2, 3}) {
        auto R = WittRing::create(p, 1, 1);
        for (const auto& shape : groups) {
            auto G = FiniteGroup::abelian(shape);
            // all rank-1 reps: generator -> unit of order dividing the cycle
            std::vector<std::vector<WittMat>> choices;
            std::vector<i64> orders;
            for (size_t i = 0; i < G.generators.size(); ++i) orders.push_back(shape[i]);
            // enumerate unit tuples
            std::vector<i64> units;
            for (i64 u = 1; u < p; ++u) units.push_back(u);
            std::vector<i64> idx(G.generators.size(), 0);
            while (true) {
                std::vector<WittMat> gimgs;
                bool valid = true;
                for (size_t i = 0; i < idx.size(); ++i) {
                    i64 u = units[idx[i]];
                    // order must divide the cycle length
                    i64 ordu = 1;
                    i64 cur = u;
                    while (cur != 1) { cur = mod_pos(cur * u, p); ++ordu; }
                    if (orders[i] % ordu != 0) valid = false;
                    gimgs.push_back(WittMat(1, 1, R->from_int(u)));
                }
                if (valid) {
                    auto rep = make_group_rep(G, R, gimgs);
                    auto ob = obstruction_group(rep);
                    CHECK(ob.zero == lift_exists_brute_force(rep));
                }
                size_t k = 0;
                while (k < idx.size() && ++idx[k] == static_cast<i64>(units.size())) idx[k++] = 0;
                if (k == idx.size()) break;
                if (idx.empty()) break;
            }
            if (G.generators.empty()) break;
        }
    }
}

TEST_CASE("deformation torsor: zhat examples") {
    // r = 1, trivial rho, any p, n = 1: exactly p classes, |H^1| = p
    for (i64 p : {2, 3, 5}) {
        auto R = WittRing::create(p, 1, 1);
        ZhatRep rep{R, 1, witt_identity(1, R)};
        auto t = deformation_torsor_zhat(rep);
        CHECK(t.deformation_classes == p);
        CHECK(t.h1_size == p);
        CHECK(t.torsor_ok);
    }
    // r = 1, P = generator of F_p^*: still p classes (conjugation trivial on ad)
    auto R3 = WittRing::create(3, 1, 1);
    ZhatRep rep{R3, 1, WittMat(1, 1, R3->from_int(2))};
    auto t = deformation_torsor_zhat(rep);
    CHECK(t.deformation_classes == 3);
    CHECK(t.h1_size == 3);
}

TEST_CASE("deformation torsor: finite quotients of order <= 8") {
    for (i64 p : {2, 3}) {
        auto R = WittRing::create(p, 1, 1);
        for (const auto& shape : std::vector<std::vector<i64>>{{2}, {4}, {2, 2}, {8}, {3}}) {
            auto G = FiniteGroup::abelian(shape);
            std::vector<WittMat> gimgs(G.generators.size(), witt_identity(1, R));
            auto rep = make_group_rep(G, R, gimgs);
            auto ob = obstruction_group(rep);
            REQUIRE(ob.zero);
            auto t = deformation_torsor_group(rep);
            CHECK(t.deformation_classes == t.h1_size);
            CHECK(t.torsor_ok);
            // cross-check |H^1| against hom counting: for the trivial rep,
            // H^1 = Hom(G, F_p), of size p^{#(cycles with p | order)}
            i64 expect = 1;
            for (i64 d : shape)
                if (d % p == 0) expect *= p;
            CHECK(t.h1_size == expect);
        }
    }
    // trivial group: single class, H^1 = 0
    auto R = WittRing::create(2, 1, 1);
    auto G1 = FiniteGroup::abelian({1});
    auto rep1 = make_group_rep(G1, R, {witt_identity(1, R)});
    auto t1 = deformation_torsor_group(rep1);
    CHECK(t1.deformation_classes == 1);
    CHECK(t1.h1_size == 1);
}

TEST_CASE("deformation torsor: rank 2 over Z/p -> Z/p^2") {
    for (i64 p : {2, 3}) {
        auto R = WittRing::create(p, 1, 1);
        // diagonal, non-scalar rank-2 rep of Z/(p-1)-free... use Zhat shape
        WittMat P(2, 2, R->zero());
        P.at(0, 0) = R->one();
        P.at(1, 1) = R->from_int(p - 1);  // -1
        ZhatRep rep{R, 1, P};
        auto t = deformation_torsor_zhat(rep);
        CHECK(t.h1_size == t.deformation_classes);
        CHECK(t.torsor_ok);
    }
}

TEST_CASE("automorphism groups") {
    // trivial rank-1 deformation: group of size p
    for (i64 p : {2, 3}) {
        auto R2 = WittRing::create(p, 2, 1);
        ZhatRep rep{R2, 1, witt_identity(1, R2)};
        auto a = automorphism_group_zhat(rep);
        CHECK(a.group_size == p);
        CHECK(a.h0_dim == 1);
        CHECK(a.identified);
    }
    // rank 2, non-scalar diagonal: diagonal automorphisms, H^0 dimension 2
    auto R2 = WittRing::create(3, 2, 1);
    WittMat P(2, 2, R2->zero());
    P.at(0, 0) = R2->one();
    P.at(1, 1) = R2->from_int(2);
    ZhatRep rep{R2, 1, P};
    auto a = automorphism_group_zhat(rep);
    CHECK(a.h0_dim == 2);
    CHECK(a.group_size == 9);
    CHECK(a.identified);

    // irreducible image: order-3 quotient into GL_2(Z/4), p = 2: the
    // centralizer is the F_4-scalars, H^0 of dimension 2
    auto R4 = WittRing::create(2, 2, 1);
    WittMat C(2, 2, R4->zero());
    C.at(0, 1) = -R4->one();
    C.at(1, 0) = R4->one();
    C.at(1, 1) = -R4->one();  // companion of x^2+x+1 over Z/4
    auto G3 = FiniteGroup::abelian({3});
    auto rep3 = make_group_rep(G3, R4, {C});
    auto a3 = automorphism_group_group(rep3);
    CHECK(a3.h0_dim == 2);
    CHECK(a3.group_size == 4);
    CHECK(a3.identified);
}

TEST_CASE("ad cohomology dimensions: cyclic group sanity") {
    // Z/p with trivial rank-1 action over F_p: H^0 = H^1 = H^2 = F_p
    for (i64 p : {2, 3}) {
        auto R = WittRing::create(p, 1, 1);
        auto G = FiniteGroup::abelian({p});
        auto rep = make_group_rep(G, R, {witt_identity(1, R)});
        auto coh = ad_cohomology(rep);
        CHECK(coh.h0 == 1);
        CHECK(coh.h1 == 1);
        CHECK(coh.h2 == 1);
    }
    // Z/2 over F_3: coprime order, higher cohomology vanishes
    auto R3 = WittRing::create(3, 1, 1);
    auto G2 = FiniteGroup::abelian({2});
    auto rep = make_group_rep(G2, R3, {WittMat(1, 1, R3->from_int(2))});
    auto coh = ad_cohomology(rep);
    CHECK(coh.h0 == 1);  // rank-1 ad is trivial as a module
    CHECK(coh.h1 == 0);
    CHECK(coh.h2 == 0);
}

TEST_CASE("beta0: zero input gives the zero class; exactness against 1 - Phi") {
    auto R = WittRing::create(3, 1, 1);
    auto fl = PeriodicFlow::point(R, 1, witt_identity(1, R));
    auto end = point_end_of_flow(fl);
    auto fp = FqField::create(3, 1);
    Mat<FqElem> zero(1, 1, fp->zero());
    auto b0 = beta0_point(end, zero);
    CHECK(b0.zero);

    // a Phi-fixed g (in End(L)) maps to zero: exactness at the middle
    Mat<FqElem> one(1, 1, fp->one());
    // Phi(1) = 1, so 1 - Phi sends h = anything with Phi(h)-h = 1... the
    // image of (1 - Phi) consists of trace-zero-type elements; g = 1 is
    // Phi-fixed, and beta0(g) is the NONZERO class here
    auto b1 = beta0_point(end, one);
    CHECK(!b1.zero);
    // g in the image of (1 - Phi): class must vanish. For A = 1, q = 3:
    // (1-Phi)(h) = h - h^3; pick h = generator-of-F_3 = 2: 2 - 8 = ... over
    // F_3: h - h^3 = 0 for all h in F_3, so extend: use q = 4 instead.
    auto R4 = WittRing::create(2, 1, 2);
    auto fl4 = PeriodicFlow::point(R4, 1, witt_identity(1, R4));
    auto end4 = point_end_of_flow(fl4);
    auto f4 = FqField::create(2, 2);
    auto omega = f4->generator();
    // g = omega - omega^2 = (1 - Phi)(omega) is in the image
    Mat<FqElem> g4(1, 1, omega - omega * omega);
    auto b4 = beta0_point(end4, g4);
    CHECK(b4.zero);
}

TEST_CASE("w_Gal = beta0(g) on constructed deformation pairs (pinned orientation)") {
    // rank 1, trivial rho-bar over F_p, level 1 -> 2: deformations
    // P~ = 1 and P~' = 1 + p c; bundles are both trivial, the mediating
    // endomorphism is g = ((P~')(P~)^{-1} - 1)/p = c... with the flow-side
    // convention A = P^{-1} the bundle iso yields g = -c; the pinned sign
    // makes beta0(g) equal w_Gal as characters Frob -> ad.
    for (i64 p : {2, 3, 5}) {
        auto R1 = WittRing::create(p, 1, 1);
        auto R2 = WittRing::create(p, 2, 1);
        ZhatRep base{R1, 1, witt_identity(1, R1)};
        for (i64 c = 1; c < p; ++c) {
            WittMat lift1 = witt_identity(1, R2);
            WittMat lift2(1, 1, R2->from_int(1 + p * c));
            auto w = w_gal_zhat(base, lift2, lift1);  // class of lift2 against lift1
            // flow side: bundles of both deformations are free rank 1; the
            // comparison endomorphism g for A = P^{-1}: A' A^{-1} = (1+pc)^{-1},
            // g = ((1+pc)^{-1} - 1)/p = -c mod p
            auto fl = PeriodicFlow::point(R1, 1, witt_identity(1, R1));
            auto end = point_end_of_flow(fl);
            auto fp = FqField::create(p, 1);
            Mat<FqElem> g(1, 1, fp->from_int(-c));
            auto b = beta0_point(end, g);
            // both classes live in H^1(Zhat, F_p) = F_p; compare values
            REQUIRE(w.size() == 1);
            REQUIRE(b.ad_coords.size() >= 1);
            i64 bval = 0;
            for (i64 x : b.ad_coords) bval = mod_pos(bval + x, p);
            CHECK(bval == w[0]);
        }
    }
}

TEST_CASE("les_check on point instances with q <= 16") {
    std::vector<std::tuple<i64, i64, std::vector<i64>>> cases = {
        {3, 1, {1}},        // trivial rank-1 over F_3
        {2, 2, {1}},        // trivial rank-1 over F_4
        {2, 2, {2}},        // omega-twist over F_4
        {13, 1, {5}},       // rank-1 over F_13
        {2, 4, {1}},        // trivial over F_16
    };
    for (auto& [p, m, entries] : cases) {
        auto R = WittRing::create(p, 1, m);
        WittMat A(1, 1, R->element(entries[0]));
        REQUIRE(A.det().is_unit());
        auto fl = PeriodicFlow::point(R, 1, A);
        auto rep = les_check_point(fl);
        CHECK(rep.exact_at_h0);
        CHECK(rep.exact_at_h0_second);
        CHECK(rep.exact_at_h1);
        CHECK(rep.surjectivity_witnessed);
    }
    // rank-2 diagonal flow over the point, p = 2
    auto R4 = WittRing::create(2, 1, 2);
    WittMat D(2, 2, R4->zero());
    D.at(0, 0) = R4->one();
    D.at(1, 1) = R4->generator();
    auto fl2 = PeriodicFlow::point(R4, 1, D);
    auto rep2 = les_check_point(fl2);
    CHECK(rep2.exact_at_h0);
    CHECK(rep2.exact_at_h0_second);
    CHECK(rep2.exact_at_h1);
    CHECK(rep2.surjectivity_witnessed);
}

TEST_CASE("Phi-fixed global endomorphisms match End of the local system") {
    auto R4 = WittRing::create(2, 1, 2);
    CHECK(phi_fixed_matches_local_system_end(
        PeriodicFlow::point(R4, 1, WittMat(1, 1, R4->generator()))));
    WittMat D(2, 2, R4->zero());
    D.at(0, 0) = R4->one();
    D.at(1, 1) = R4->generator();
    CHECK(phi_fixed_matches_local_system_end(PeriodicFlow::point(R4, 1, D)));
    auto R3 = WittRing::create(3, 1, 1);
    CHECK(phi_fixed_matches_local_system_end(
        PeriodicFlow::point(R3, 1, WittMat(1, 1, R3->from_int(2)))));
}

TEST_CASE("degenerate identities with certificates") {
    auto R = WittRing::create(3, 2, 1);
    ZhatRep rep{R, 1, WittMat(1, 1, R->from_int(5))};
    auto d = degenerate_identities_zhat(rep);
    CHECK(d.ob_rho_zero);
    CHECK(d.ob_E_zero);
    CHECK(d.alpha2_identity);
    CHECK(d.v_identity);
}
