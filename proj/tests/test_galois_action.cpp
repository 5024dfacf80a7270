#include "doctest.h"
#include "wittflow/galois_action.hpp"

using namespace wittflow;

TEST_CASE("rep twists") {
    auto R = WittRing::create(2, 1, 2);
    ZhatRep rep{R, 2, WittMat(1, 1, R->generator())};
    // twist by sigma_0^f on a W(F_{p^f})-rep is the identity operation
    auto tw = rep_coeff_twist(rep, 2);
    CHECK(tw.P == rep.P);
    // rank 1 over F_4, P = omega, twist by sigma_0: P = omega^2
    auto t1 = rep_coeff_twist(rep, 1);
    CHECK(t1.P.at(0, 0) == R->generator() * R->generator());
    // double twist = twist by the square
    auto t2 = rep_coeff_twist(rep_coeff_twist(rep, 1), 1);
    CHECK(t2.P == rep_coeff_twist(rep, 2).P);
}

TEST_CASE("geo twist on Kummer characters: rho o sigma~ = rho^q") {
    // quadratic character over F_3 (q = 3): exponent mod 2 is 1, so fixed
    auto alg = LaurentAlgebra::create(WittRing::create(3, 1, 1));
    auto F = FrobeniusLift::standard(alg);
    auto fl = PeriodicFlow::curve(alg, F, 1, LaurentMat(1, 1, alg->t(1)));
    auto res = flow_to_rep_curve(fl);
    auto tw = rep_geo_twist(res.rep, 3);
    CHECK(tw.geo_gens[0] == res.rep.geo_gens[0]);

    // order-3 character over F_4 (q = 4): exponent 4 mod 3 = 1, fixed as well
    auto alg4 = LaurentAlgebra::create(WittRing::create(2, 1, 2));
    auto F4 = FrobeniusLift::standard(alg4);
    auto spec = EtaleCoverSpec::kummer(alg4, 3);
    auto fl4 = PeriodicFlow::curve(alg4, F4, 1, LaurentMat(1, 1, alg4->t(1)));
    auto res4 = flow_to_rep_curve(fl4);
    auto tw4 = rep_geo_twist(res4.rep, 4);
    for (size_t l = 0; l < res4.rep.geo_gens.size(); ++l)
        CHECK(tw4.geo_gens[l] == res4.rep.geo_gens[l]);
    // by contrast, twisting by the prime power q = 2 squares the generator
    auto tw2 = rep_geo_twist(res4.rep, 2);
    CHECK(tw2.geo_gens[0] == res4.rep.geo_gens[0] * res4.rep.geo_gens[0]);
}

TEST_CASE("right action identities: point cases") {
    // trivial pair
    auto R3 = WittRing::create(3, 1, 1);
    auto triv = PeriodicFlow::point(R3, 1, witt_identity(1, R3));
    auto rep0 = verify_right_action_point(triv);
    CHECK(rep0.identity_pullback);
    CHECK(rep0.identity_shift);

    // q = 4, rank 1, A = omega: shift matches the coefficient twist
    auto R4 = WittRing::create(2, 1, 2);
    for (i64 f : {1, 2}) {
        auto fl = PeriodicFlow::point(R4, f, WittMat(1, 1, R4->generator()));
        auto r = verify_right_action_point(fl);
        CHECK(r.identity_pullback);
        CHECK(r.identity_shift);
    }

    // a level-2 instance
    auto R9 = WittRing::create(3, 2, 1);
    auto fl9 = PeriodicFlow::point(R9, 1, WittMat(1, 1, R9->from_int(5)));
    auto r9 = verify_right_action_point(fl9);
    CHECK(r9.identity_pullback);
    CHECK(r9.identity_shift);
}

TEST_CASE("right action identities: Kummer pair over F_3") {
    auto alg = LaurentAlgebra::create(WittRing::create(3, 1, 1));
    auto F = FrobeniusLift::standard(alg);
    auto fl = PeriodicFlow::curve(alg, F, 1, LaurentMat(1, 1, alg->t(1)));
    auto r = verify_right_action_curve(fl);
    CHECK(r.identity_pullback);
    CHECK(r.identity_shift);
}

TEST_CASE("main corollary: point cases with N-stability") {
    // m = f = 1, N = 1: zero shifts
    auto R3 = WittRing::create(3, 1, 1);
    auto fl = PeriodicFlow::point(R3, 1, WittMat(1, 1, R3->from_int(2)));
    auto rep = verify_main_corollary_point(fl, {1, 2});
    CHECK(rep.iso);
    CHECK(rep.n_stable);

    // q = 4, f = 2: N f - m = 2N - 2
    auto R4 = WittRing::create(2, 1, 2);
    auto fl4 = PeriodicFlow::point(R4, 2, WittMat(1, 1, R4->generator()));
    auto rep4 = verify_main_corollary_point(fl4, {1, 2});
    CHECK(rep4.iso);
    CHECK(rep4.n_stable);

    // sigma = identity convention: the tautology flow iso shift^0(flow)
    auto taut = verify_main_corollary_point(fl, {1});
    CHECK(taut.iso);
}

TEST_CASE("main corollary: Kummer pair over F_3, N in {1, 2}") {
    auto alg = LaurentAlgebra::create(WittRing::create(3, 1, 1));
    auto F = FrobeniusLift::standard(alg);
    auto fl = PeriodicFlow::curve(alg, F, 1, LaurentMat(1, 1, alg->t(1)));
    auto rep = verify_main_corollary_curve(fl, {1, 2});
    CHECK(rep.iso);
    CHECK(rep.n_stable);
}

TEST_CASE("geo and coeff twists commute up to isomorphism") {
    auto alg4 = LaurentAlgebra::create(WittRing::create(2, 1, 2));
    auto F4 = FrobeniusLift::standard(alg4);
    auto fl4 = PeriodicFlow::curve(alg4, F4, 1, LaurentMat(1, 1, alg4->t(1)));
    auto res = flow_to_rep_curve(fl4);
    auto a = rep_coeff_twist(rep_geo_twist(res.rep, 2), 1);
    auto b = rep_geo_twist(rep_coeff_twist(res.rep, 1), 2);
    for (size_t l = 0; l < a.geo_gens.size(); ++l)
        CHECK(reps_conjugate(a.geo_gens[l], b.geo_gens[l]).has_value());
    CHECK(reps_conjugate(a.arith, b.arith).has_value());
}
