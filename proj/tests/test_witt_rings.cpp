#include "doctest.h"
#include "wittflow/witt_rings.hpp"

#include <set>
#include <vector>

using namespace wittflow;

TEST_CASE("gr_create degenerate and small cases") {
    auto z4 = WittRing::create(2, 2, 1);
    CHECK(z4->lifted_modulus() == std::vector<i64>{0, 1});
    CHECK(z4->size() == 4);
    CHECK((z4->from_int(3) * z4->from_int(3)).is_one());

    auto z9 = WittRing::create(3, 2, 1);
    CHECK(z9->size() == 9);
    CHECK(z9->from_int(10) == z9->one());

    // Z/4[x]/(x^2+x+1): that modulus is its own Hensel lift.
    auto gr42 = WittRing::create(2, 2, 2);
    CHECK(gr42->lifted_modulus() == std::vector<i64>{1, 1, 1});
    // independent check that x^2+x+1 divides x^3 - 1 over Z/4
    // (x^3 - 1) = (x - 1)(x^2 + x + 1) holds over the integers, so remainder 0.
    auto g = gr42->generator();
    CHECK((g * g * g).is_one());

    CHECK_THROWS_AS(WittRing::create(6, 2, 1), InvalidArgument);
    CHECK_THROWS_AS(WittRing::create(2, 0, 1), InvalidArgument);
}

TEST_CASE("lifted modulus reduces through the level tower") {
    auto r3 = WittRing::create(2, 3, 2);
    auto r2 = WittRing::create(2, 2, 2);
    for (size_t i = 0; i < r3->lifted_modulus().size(); ++i)
        CHECK(mod_pos(r3->lifted_modulus()[i], 4) == r2->lifted_modulus()[i]);
    auto s3 = WittRing::create(3, 3, 2);
    auto s2 = WittRing::create(3, 2, 2);
    for (size_t i = 0; i < s3->lifted_modulus().size(); ++i)
        CHECK(mod_pos(s3->lifted_modulus()[i], 9) == s2->lifted_modulus()[i]);
}

TEST_CASE("ring axioms exhaustively for |R| <= 81") {
    for (auto [p, n, m] : std::vector<std::tuple<i64, i64, i64>>{{2, 2, 2}, {2, 3, 1}, {3, 2, 2}, {3, 4, 1}, {2, 2, 3}}) {
        auto R = WittRing::create(p, n, m);
        i64 sz = R->size();
        REQUIRE(sz <= 512);
        i64 step = sz <= 81 ? 1 : 3;
        for (i64 a = 0; a < sz; a += step)
            for (i64 b = 0; b < sz; b += step) {
                auto x = R->element(a), y = R->element(b);
                CHECK(x * y == y * x);
                CHECK(x + y == y + x);
            }
        for (i64 a = 0; a < sz; a += 2 * step)
            for (i64 b = 0; b < sz; b += 2 * step)
                for (i64 c = 0; c < sz; c += 3 * step) {
                    auto x = R->element(a), y = R->element(b), z = R->element(c);
                    CHECK((x * y) * z == x * (y * z));
                    CHECK(x * (y + z) == x * y + x * z);
                }
    }
}

TEST_CASE("units are exactly the elements nonzero mod p, with the right count") {
    for (auto [p, n, m] : std::vector<std::tuple<i64, i64, i64>>{{2, 2, 2}, {3, 2, 1}, {3, 2, 2}, {2, 3, 2}}) {
        auto R = WittRing::create(p, n, m);
        i64 units = 0;
        for (i64 i = 0; i < R->size(); ++i) {
            auto x = R->element(i);
            if (x.is_unit()) {
                ++units;
                CHECK((x * x.inverse()).is_one());
            } else {
                CHECK_THROWS_AS(x.inverse(), InvalidArgument);
            }
        }
        i64 expect = pow_i64(p, (n - 1) * m) * (pow_i64(p, m) - 1);
        CHECK(units == expect);
    }
}

TEST_CASE("teichmuller lift") {
    auto z4 = WittRing::create(2, 2, 1);
    CHECK(teichmuller(z4->base()->one(), z4).is_one());

    // GR(4,2): tau(omega)^3 = 1 and tau(omega) == omega mod 2; oracle by
    // enumerating all 16 elements and selecting cube roots of unity.
    auto gr = WittRing::create(2, 2, 2);
    auto omega = gr->base()->generator();
    auto tw = teichmuller(omega, gr);
    CHECK((tw * tw * tw).is_one());
    CHECK(gr->reduce_to_base(tw) == omega);
    std::set<i64> cube_roots;
    for (i64 i = 0; i < 16; ++i) {
        auto x = gr->element(i);
        if ((x * x * x).is_one()) cube_roots.insert(x.index());
    }
    CHECK(cube_roots.size() == 3);
    CHECK(cube_roots.count(tw.index()) == 1);

    // multiplicativity tau(ab) = tau(a)tau(b), exhaustive over all 81 pairs
    // in GR(9, 2)
    auto gr9 = WittRing::create(3, 2, 2);
    auto f9 = gr9->base();
    for (i64 a = 0; a < 9; ++a)
        for (i64 b = 0; b < 9; ++b) {
            auto ea = f9->element(a), eb = f9->element(b);
            CHECK(teichmuller(ea * eb, gr9) == teichmuller(ea, gr9) * teichmuller(eb, gr9));
        }
    // tau(0) = 0 and tau(a)^{p^m} = tau(a)
    CHECK(teichmuller(f9->zero(), gr9).is_zero());
    for (i64 a = 0; a < 9; ++a) {
        auto t = teichmuller(f9->element(a), gr9);
        CHECK(t.pow(9) == t);
    }
}

TEST_CASE("sigma") {
    // identity on Z/p^n
    auto z9 = WittRing::create(3, 2, 1);
    for (i64 i = 0; i < 9; ++i) CHECK(sigma(z9->element(i)) == z9->element(i));

    auto gr = WittRing::create(2, 2, 2);
    // sigma(tau(a)) = tau(a^p) for all a in F_4
    for (i64 a = 0; a < 4; ++a) {
        auto ea = gr->base()->element(a);
        CHECK(sigma(teichmuller(ea, gr)) == teichmuller(frobenius(ea), gr));
    }
    // sigma^2 = id on all 16 elements; sigma is a ring hom; sigma == x^p mod p
    for (i64 i = 0; i < 16; ++i) {
        auto x = gr->element(i);
        CHECK(sigma(sigma(x)) == x);
        CHECK(gr->reduce_to_base(sigma(x)) == frobenius(gr->reduce_to_base(x)));
        for (i64 j = 0; j < 16; j += 3) {
            auto y = gr->element(j);
            CHECK(sigma(x * y) == sigma(x) * sigma(y));
            CHECK(sigma(x + y) == sigma(x) + sigma(y));
        }
    }
}

TEST_CASE("sigma^d fixes exactly the image of W_n(F_{p^d})") {
    // in GR(4, 2): fixed points of sigma are the image of Z/4
    auto gr = WittRing::create(2, 2, 2);
    i64 fixed = 0;
    for (i64 i = 0; i < 16; ++i)
        if (sigma(gr->element(i)) == gr->element(i)) ++fixed;
    CHECK(fixed == 4);
    // in GR(p=2, n=2, m=4): fixed points of sigma^2 = image of GR(4, 2)
    auto big = WittRing::create(2, 2, 4);
    auto emb = WittEmbedding::canonical(gr, big);
    std::set<i64> image;
    for (i64 i = 0; i < 16; ++i) image.insert(emb.apply(gr->element(i)).index());
    i64 fixed2 = 0;
    for (i64 i = 0; i < big->size(); ++i) {
        auto x = big->element(i);
        if (sigma(sigma(x)) == x) {
            ++fixed2;
            CHECK(image.count(x.index()) == 1);
        }
    }
    CHECK(fixed2 == 16);
}

TEST_CASE("reduction commutes with sigma and teichmuller") {
    auto r3 = WittRing::create(2, 3, 2);
    auto r2 = WittRing::create(2, 2, 2);
    for (i64 i = 0; i < r3->size(); ++i) {
        auto x = r3->element(i);
        CHECK(reduce_level(sigma(x), r2) == sigma(reduce_level(x, r2)));
    }
    for (i64 a = 0; a < 4; ++a) {
        auto ea = r3->base()->element(a);
        CHECK(reduce_level(teichmuller(ea, r3), r2) == teichmuller(ea, r2));
    }
    // surjectivity: every element of r2 is hit
    std::set<i64> hits;
    for (i64 i = 0; i < r3->size(); ++i) hits.insert(reduce_level(r3->element(i), r2).index());
    CHECK(static_cast<i64>(hits.size()) == r2->size());
}

TEST_CASE("witt embedding is a sigma-compatible ring homomorphism") {
    auto small = WittRing::create(2, 2, 2);
    auto big = WittRing::create(2, 2, 4);
    auto emb = WittEmbedding::canonical(small, big);
    for (i64 i = 0; i < 16; ++i) {
        auto x = small->element(i);
        CHECK(emb.apply(sigma(x)) == sigma(emb.apply(x)));
        for (i64 j = 0; j < 16; j += 5) {
            auto y = small->element(j);
            CHECK(emb.apply(x * y) == emb.apply(x) * emb.apply(y));
            CHECK(emb.apply(x + y) == emb.apply(x) + emb.apply(y));
        }
    }
    // injectivity on a sample
    std::set<i64> img;
    for (i64 i = 0; i < 16; ++i) img.insert(emb.apply(small->element(i)).index());
    CHECK(img.size() == 16);
}

namespace {

// Witt sum second coordinate: a1 + b1 - sum_{0<i<p} (1/p) C(p,i) a0^i b0^{p-i}.
FqElem witt_sum_second(const FqElem& a0, const FqElem& a1, const FqElem& b0, const FqElem& b1) {
    auto fld = a0.field();
    i64 p = fld->p();
    // binomials C(p,i)/p are integers
    std::vector<i64> coef;
    for (i64 i = 1; i < p; ++i) {
        // C(p,i)/p = (p-1)! / (i! (p-i)!)
        i64 num = 1;
        for (i64 k = p - i + 1; k <= p - 1; ++k) num *= k;
        i64 den = 1;
        for (i64 k = 2; k <= i; ++k) den *= k;
        coef.push_back(num / den);
    }
    FqElem acc = a1 + b1;
    for (i64 i = 1; i < p; ++i) {
        FqElem term = a0.pow(i) * b0.pow(p - i);
        acc = acc - fld->from_int(coef[i - 1]) * term;
    }
    return acc;
}

}  // namespace

TEST_CASE("n = 2 witt coordinate oracle agrees with galois-ring arithmetic") {
    // spec'd instances first
    auto z4 = WittRing::create(2, 2, 1);
    auto f2 = z4->base();
    auto two = from_witt_coords(f2->one(), f2->zero(), z4) + from_witt_coords(f2->one(), f2->zero(), z4);
    auto [c0, c1] = to_witt_coords(two);
    CHECK(c0.is_zero());
    CHECK(c1.is_one());
    CHECK(from_witt_coords(f2->zero(), f2->zero(), z4).is_zero());

    auto z9 = WittRing::create(3, 2, 1);
    auto f3 = z9->base();
    auto s = from_witt_coords(f3->one(), f3->zero(), z9) + from_witt_coords(f3->from_int(2), f3->zero(), z9);
    auto [d0, d1] = to_witt_coords(s);
    CHECK(d0.is_zero());
    CHECK(s == z9->one() + teichmuller(f3->from_int(2), z9));

    // full agreement of the Witt sum formula with ring addition, p in {2,3},
    // m in {1,2}, over all coordinate pairs
    for (auto [p, m] : std::vector<std::pair<i64, i64>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
        auto R = WittRing::create(p, 2, m);
        auto F = R->base();
        for (i64 a0 = 0; a0 < F->size(); ++a0)
            for (i64 a1 = 0; a1 < F->size(); ++a1)
                for (i64 b0 = 0; b0 < F->size(); ++b0)
                    for (i64 b1 = 0; b1 < F->size(); ++b1) {
                        auto ea0 = F->element(a0), ea1 = F->element(a1);
                        auto eb0 = F->element(b0), eb1 = F->element(b1);
                        auto lhs = from_witt_coords(ea0, ea1, R) + from_witt_coords(eb0, eb1, R);
                        auto [r0, r1] = to_witt_coords(lhs);
                        CHECK(r0 == ea0 + eb0);
                        CHECK(r1 == witt_sum_second(ea0, ea1, eb0, eb1));
                    }
    }

    CHECK_THROWS_AS(to_witt_coords(WittRing::create(2, 3, 1)->one()), InvalidArgument);
}

TEST_CASE("roundtrip witt coords") {
    for (auto [p, m] : std::vector<std::pair<i64, i64>>{{2, 2}, {3, 1}}) {
        auto R = WittRing::create(p, 2, m);
        for (i64 i = 0; i < R->size(); ++i) {
            auto x = R->element(i);
            auto [a0, a1] = to_witt_coords(x);
            CHECK(from_witt_coords(a0, a1, R) == x);
        }
    }
}
