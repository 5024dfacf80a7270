#include "doctest.h"
#include "wittflow/finite_fields.hpp"

#include <algorithm>
#include <vector>

using namespace wittflow;

namespace {

// Independent irreducibility oracle: trial division by every monic
// polynomial of degree 1..deg/2.
bool irreducible_by_trial_division(const std::vector<i64>& f, i64 p) {
    i64 deg = static_cast<i64>(f.size()) - 1;
    for (i64 d = 1; d <= deg / 2; ++d) {
        i64 count = 1;
        for (i64 i = 0; i < d; ++i) count *= p;
        for (i64 idx = 0; idx < count; ++idx) {
            std::vector<i64> g(d + 1, 0);
            g[d] = 1;
            i64 rem = idx;
            for (i64 i = 0; i < d; ++i) { g[i] = rem % p; rem /= p; }
            // long-divide f by g, checking for zero remainder
            std::vector<i64> r = f;
            while (static_cast<i64>(r.size()) >= d + 1) {
                i64 lead = r.back();
                i64 shift = static_cast<i64>(r.size()) - (d + 1);
                for (i64 i = 0; i <= d; ++i)
                    r[shift + i] = ((r[shift + i] - lead * g[i]) % p + p) % p;
                while (!r.empty() && r.back() == 0) r.pop_back();
            }
            if (r.empty()) return false;
        }
    }
    return true;
}

// Enumerate monic degree-m polynomials in canonical lexicographic order
// (constant coefficient most significant) and return the first irreducible.
std::vector<i64> first_irreducible_by_enumeration(i64 p, i64 m) {
    std::vector<i64> digits(m, 0);
    while (true) {
        std::vector<i64> f(digits.begin(), digits.end());
        f.push_back(1);
        if (irreducible_by_trial_division(f, p)) return f;
        i64 i = m - 1;
        while (i >= 0 && digits[i] == p - 1) digits[i--] = 0;
        REQUIRE(i >= 0);
        ++digits[i];
    }
}

}  // namespace

TEST_CASE("canonical moduli match the enumeration oracle") {
    // (2,2) -> x^2+x+1, unique irreducible quadratic over F_2
    auto f4 = FqField::create(2, 2);
    CHECK(f4->modulus() == std::vector<i64>{1, 1, 1});

    // (2,1): prime-field convention, modulus x
    auto f2 = FqField::create(2, 1);
    CHECK(f2->modulus() == std::vector<i64>{0, 1});

    for (auto [p, m] : std::vector<std::pair<i64, i64>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}}) {
        auto fld = FqField::create(p, m);
        CHECK(fld->modulus() == first_irreducible_by_enumeration(p, m));
    }
}

TEST_CASE("field_create rejects bad input") {
    CHECK_THROWS_AS(FqField::create(4, 1), InvalidArgument);
    CHECK_THROWS_AS(FqField::create(2, 0), InvalidArgument);
}

TEST_CASE("field axioms on exhaustive samples (p^m <= 3^4)") {
    for (auto [p, m] : std::vector<std::pair<i64, i64>>{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {3, 4}}) {
        auto fld = FqField::create(p, m);
        i64 q = fld->size();
        // inverses of nonzero elements
        for (i64 i = 1; i < q; ++i) {
            auto x = fld->element(i);
            CHECK((x * x.inverse()).is_one());
        }
        // associativity + distributivity on a full cube for the small fields,
        // a strided cube otherwise
        i64 step = q <= 16 ? 1 : 7;
        for (i64 a = 0; a < q; a += step)
            for (i64 b = 0; b < q; b += step)
                for (i64 c = 0; c < q; c += step) {
                    auto x = fld->element(a), y = fld->element(b), z = fld->element(c);
                    CHECK((x * y) * z == x * (y * z));
                    CHECK(x * (y + z) == x * y + x * z);
                    CHECK((x + y) + z == x + (y + z));
                }
    }
}

TEST_CASE("frobenius is a ring automorphism with fixed field F_p") {
    auto f9 = FqField::create(3, 2);
    // frobenius^m = identity on every element of F_9
    for (i64 i = 0; i < 9; ++i) {
        auto x = f9->element(i);
        CHECK(frobenius(frobenius(x)) == x);
    }
    // in F_4: omega -> omega^2 = omega + 1
    auto f4 = FqField::create(2, 2);
    auto omega = f4->generator();
    CHECK(frobenius(omega) == omega * omega);
    CHECK(frobenius(omega) == omega + f4->one());
    // fixed set of frobenius = prime field image, exhaustively
    for (auto fld : {f4, f9, FqField::create(2, 4)}) {
        i64 fixed = 0;
        for (i64 i = 0; i < fld->size(); ++i) {
            auto x = fld->element(i);
            if (frobenius(x) == x) {
                ++fixed;
                // must be one of the constants
                bool constant = true;
                for (size_t k = 1; k < x.coeffs().size(); ++k)
                    if (x.coeffs()[k] != 0) constant = false;
                CHECK(constant);
            }
        }
        CHECK(fixed == fld->p());
        // homomorphism + bijectivity spot checks
        for (i64 i = 0; i < fld->size(); i += 3)
            for (i64 j = 0; j < fld->size(); j += 5) {
                auto x = fld->element(i), y = fld->element(j);
                CHECK(frobenius(x * y) == frobenius(x) * frobenius(y));
                CHECK(frobenius(x + y) == frobenius(x) + frobenius(y));
            }
    }
}

TEST_CASE("frobenius(1) = 1") {
    auto f5 = FqField::create(5, 1);
    CHECK(frobenius(f5->one()) == f5->one());
}

TEST_CASE("canonical embeddings") {
    auto f2 = FqField::create(2, 1);
    auto f4 = FqField::create(2, 2);
    auto f16 = FqField::create(2, 4);

    // embed(F_2, F_4): 1 -> 1
    auto e24 = FieldEmbedding::canonical(f2, f4);
    CHECK(e24.apply(f2->one()) == f4->one());

    // embed(F_4, F_16): generator maps to the first root of x^2+x+1
    auto e416 = FieldEmbedding::canonical(f4, f16);
    auto im = e416.generator_image();
    CHECK((im * im + im + f16->one()).is_zero());
    // first in enumeration order among the two roots
    auto other = frobenius(im);
    CHECK(im.index() < other.index());

    // ring homomorphism on all of F_4
    for (i64 i = 0; i < 4; ++i)
        for (i64 j = 0; j < 4; ++j) {
            auto x = f4->element(i), y = f4->element(j);
            CHECK(e416.apply(x * y) == e416.apply(x) * e416.apply(y));
            CHECK(e416.apply(x + y) == e416.apply(x) + e416.apply(y));
        }
    // injectivity and Frobenius compatibility
    for (i64 i = 0; i < 4; ++i) {
        auto x = f4->element(i);
        CHECK(e416.apply(frobenius(x)) == frobenius(e416.apply(x)));
        for (i64 j = i + 1; j < 4; ++j) CHECK(e416.apply(x) != e416.apply(f4->element(j)));
    }

    // transitivity through the prime field
    auto e216 = FieldEmbedding::canonical(f2, f16);
    for (i64 i = 0; i < 2; ++i) {
        auto x = f2->element(i);
        CHECK(e216.apply(x) == e416.apply(e24.apply(x)));
    }

    CHECK_THROWS_AS(FieldEmbedding::canonical(f4, FqField::create(2, 3)), InvalidArgument);
}

TEST_CASE("exactly a embeddings F_{p^a} -> F_{p^b}, differing by frobenius powers") {
    for (auto [a, b] : std::vector<std::pair<i64, i64>>{{2, 4}, {2, 6}, {3, 6}}) {
        auto src = FqField::create(2, a);
        auto dst = FqField::create(2, b);
        auto roots = roots_in_field(src->modulus(), dst);
        CHECK(static_cast<i64>(roots.size()) == a);
        // each root generates an embedding; roots form one frobenius orbit
        auto first = roots.front();
        std::vector<i64> orbit;
        auto cur = first;
        for (i64 k = 0; k < a; ++k) {
            orbit.push_back(cur.index());
            cur = frobenius(cur);
        }
        CHECK(cur == first);
        std::sort(orbit.begin(), orbit.end());
        std::vector<i64> root_idx;
        for (auto& r : roots) root_idx.push_back(r.index());
        CHECK(orbit == root_idx);
    }
}

TEST_CASE("roots_in_field works beyond the enumeration budget") {
    // F_2^64 is far beyond enumeration; x^2+x+1 still has its two roots found.
    auto big = FqField::create(2, 64);
    CHECK(!big->enumerable());
    auto roots = roots_in_field(std::vector<i64>{1, 1, 1}, big);
    REQUIRE(roots.size() == 2);
    for (auto& r : roots) CHECK((r * r + r + big->one()).is_zero());
}
