#include "doctest.h"
#include "wittflow/covers.hpp"

using namespace wittflow;

namespace {

LaurentAlgebraPtr alg_at(i64 p, i64 n, i64 m) {
    return LaurentAlgebra::create(WittRing::create(p, n, m));
}

}  // namespace

TEST_CASE("kummer cover spec validation") {
    auto base = alg_at(3, 1, 1);
    CHECK_THROWS_AS(EtaleCoverSpec::kummer(base, 3), InvalidArgument);  // p | N
    CHECK_THROWS_AS(EtaleCoverSpec::kummer(base, 4), InvalidArgument);  // mu_4 not in F_3
    auto spec = EtaleCoverSpec::kummer(base, 2);
    CHECK(spec.degree() == 2);
    CHECK(spec.connected());
    // zeta = -1 in F_3
    CHECK(spec.kummer_root() == base->coeffs()->base()->from_int(2));
}

TEST_CASE("artin-schreier connectedness flag") {
    auto base = alg_at(2, 1, 1);
    auto connected = EtaleCoverSpec::artin_schreier(base, base->t(1));
    CHECK(connected.connected());
    // g = h^2 - h with h = t^2:  t^4 - t^2 splits
    auto split = EtaleCoverSpec::artin_schreier(base, base->t(4) - base->t(2));
    CHECK(!split.connected());
    // g = 0 splits too
    CHECK(!EtaleCoverSpec::artin_schreier(base, base->zero()).connected());
}

TEST_CASE("kummer frobenius lift: u^2 = t over F_3, n = 2, F(t) = t^3 gives F_Y(u) = u^3") {
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto base2 = alg_at(3, 2, 1);
    auto F = FrobeniusLift::standard(base2);
    auto cover = LiftedCover::lift(spec, 2, F);
    auto u = cover->generator(0);
    CHECK(cover->frobenius_image(0) == u.pow(3));
    // F_Y restricted to the base is F
    CHECK(cover->frobenius(cover->from_base(base2->t(1))) == cover->from_base(base2->t(3)));
}

TEST_CASE("artin-schreier frobenius at level 1 is the p-power map") {
    for (i64 p : {2, 3}) {
        auto base1 = alg_at(p, 1, 1);
        auto spec = EtaleCoverSpec::artin_schreier(base1, base1->t(1));
        auto F = FrobeniusLift::standard(base1);
        auto cover = LiftedCover::lift(spec, 1, F);
        auto u = cover->generator(0);
        CHECK(cover->frobenius_image(0) == u.pow(p));
        CHECK(cover->frobenius(u + cover->one()) == (u + cover->one()).pow(p));
    }
}

TEST_CASE("kummer with perturbed lift: F'(t) = t^3(1+3t), Newton square root") {
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto base2 = alg_at(3, 2, 1);
    FrobeniusLift F2(base2, base2->t(3) + base2->t(4).times_int(3));
    auto cover = LiftedCover::lift(spec, 2, F2);
    auto img = cover->frobenius_image(0);
    // defining check: img^2 = F'(t) and img = u^3 mod 3
    CHECK(img.pow(2) == cover->from_base(F2.image_of_t()));
    auto diff = img - cover->generator(0).pow(3);
    CHECK(diff.val() >= 1);
}

TEST_CASE("galois action") {
    // Kummer u^2 = t over F_3: nontrivial element sends u -> -u, u+1 -> 1-u
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto F1 = FrobeniusLift::standard(base1);
    auto cover = LiftedCover::lift(spec, 1, F1);
    auto u = cover->generator(0);
    CoverGroupElem id{{0}}, gamma{{1}};
    CHECK(cover->galois_act(id, u + cover->one()) == u + cover->one());
    CHECK(cover->galois_act(gamma, u + cover->one()) == cover->one() - u);
    // fixes the base pointwise
    CHECK(cover->galois_act(gamma, cover->from_base(base1->t(5))) == cover->from_base(base1->t(5)));

    // Artin-Schreier u^2 - u = g over F_2: c = 1 sends u -> u + 1
    auto base2 = alg_at(2, 1, 1);
    auto as = EtaleCoverSpec::artin_schreier(base2, base2->t(1));
    auto cas = LiftedCover::lift(as, 1, FrobeniusLift::standard(base2));
    auto v = cas->generator(0);
    CHECK(cas->galois_act(CoverGroupElem{{1}}, v) == v + cas->one());
}

TEST_CASE("frobenius commutes with the whole lifted galois action") {
    // composite cover (Kummer then AS) over F_3 at level 2
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2).then_artin_schreier(base1->t(1));
    auto base2 = alg_at(3, 2, 1);
    auto F = FrobeniusLift::standard(base2);
    auto cover = LiftedCover::lift(spec, 2, F);
    CHECK(cover->degree() == 6);
    // probe elements: generators, sums, base multiples
    std::vector<CoverElem> probes = {
        cover->generator(0), cover->generator(1),
        cover->generator(0) * cover->generator(1) + cover->from_base(base2->t(-1)),
    };
    for (const auto& g : cover->group_elements())
        for (const auto& x : probes)
            CHECK(cover->frobenius(cover->galois_act(g, x)) ==
                  cover->galois_act(g, cover->frobenius(x)));
}

TEST_CASE("galois action is a group action of the right shape") {
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto base2 = alg_at(3, 2, 1);
    auto cover = LiftedCover::lift(spec, 2, FrobeniusLift::standard(base2));
    auto u = cover->generator(0);
    // gamma^2 = id
    auto once = cover->galois_act(CoverGroupElem{{1}}, u);
    auto twice = cover->galois_act(CoverGroupElem{{1}}, once);
    CHECK(twice == u);
    // action by ring automorphisms
    auto x = u + cover->from_base(base2->t(2));
    auto y = u * u - cover->from_base(base2->t(-1));
    CoverGroupElem g{{1}};
    CHECK(cover->galois_act(g, x * y) == cover->galois_act(g, x) * cover->galois_act(g, y));
    CHECK(cover->galois_act(g, x + y) == cover->galois_act(g, x) + cover->galois_act(g, y));
}

TEST_CASE("tower compatibility of the lifted data") {
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto base2 = alg_at(3, 2, 1);
    auto c2 = LiftedCover::lift(spec, 2, FrobeniusLift::standard(base2));
    auto c1 = LiftedCover::lift(spec, 1, FrobeniusLift::standard(base1));
    CHECK(reduce_cover_elem(c2->frobenius_image(0), c1) == c1->frobenius_image(0));
    CHECK(reduce_cover_elem(c2->galois_generator_image(0), c1) == c1->galois_generator_image(0));
}

TEST_CASE("fixed subring of the galois action is the base") {
    auto base1 = alg_at(3, 1, 1);
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto cover = LiftedCover::lift(spec, 1, FrobeniusLift::standard(base1));
    // spanning set: u^i t^e for i < 2, |e| <= 3
    for (i64 i = 0; i < 2; ++i)
        for (i64 e = -3; e <= 3; ++e) {
            auto x = cover->generator(0).pow(i).scaled(base1->t(e));
            bool fixed = true;
            for (const auto& g : cover->group_elements())
                if (!(cover->galois_act(g, x) == x)) fixed = false;
            CHECK(fixed == (i == 0));
        }
}

TEST_CASE("cover derivative: implicit differentiation through the relation") {
    auto base = LaurentAlgebra::create(WittRing::create(3, 2, 1));
    auto base1 = LaurentAlgebra::create(WittRing::create(3, 1, 1));
    auto spec = EtaleCoverSpec::kummer(base1, 2);
    auto cover = LiftedCover::lift(spec, 2, FrobeniusLift::standard(base));
    auto u = cover->generator(0);
    // d(u^2)/dt = d(t)/dt = 1
    CHECK(cover_derivative(u * u).is_one());
    // Leibniz: d(u * t)/dt = u + t u'
    auto t = cover->from_base(base->t(1));
    auto lhs = cover_derivative(u * t);
    auto rhs = u + t * cover_derivative(u);
    CHECK(lhs == rhs);
    // Artin-Schreier layer: u^3 - u = t differentiates to (3u^2 - 1)u' = 1
    auto as = EtaleCoverSpec::artin_schreier(base1, base1->t(1));
    auto cas = LiftedCover::lift(as, 2, FrobeniusLift::standard(base));
    auto v = cas->generator(0);
    auto dv = cover_derivative(v);
    auto three_v2 = (v * v).scaled(base->one().times_int(3));
    CHECK((three_v2 - cas->one()) * dv == cas->one());
}
