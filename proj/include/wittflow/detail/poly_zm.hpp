#pragma once

// Dense univariate polynomial helpers over Z/M, coefficients stored
// constant-term first. Shared by the finite-field and Galois-ring layers.

#include <vector>

#include "wittflow/common.hpp"

namespace wittflow::detail {

using Poly = std::vector<i64>;

inline void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_add(const Poly& a, const Poly& b, i64 M) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        i64 v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = mod_pos(v, M);
    }
    poly_trim(r);
    return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b, i64 M) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        i64 v = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
        r[i] = mod_pos(v, M);
    }
    poly_trim(r);
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b, i64 M) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = mod_pos(r[i + j] + a[i] * b[j], M);
    }
    poly_trim(r);
    return r;
}

// Remainder of a modulo the monic polynomial f.
inline Poly poly_rem_monic(Poly a, const Poly& f, i64 M) {
    const size_t d = f.size() - 1;
    while (a.size() > d) {
        i64 lead = a.back();
        size_t shift = a.size() - 1 - d;
        if (lead != 0) {
            for (size_t i = 0; i < d; ++i)
                a[shift + i] = mod_pos(a[shift + i] - lead * f[i], M);
        }
        a.pop_back();
    }
    poly_trim(a);
    return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, i64 M) {
    return poly_rem_monic(poly_mul(a, b, M), f, M);
}

// a^e mod f, e >= 0.
inline Poly poly_powmod(Poly a, i64 e, const Poly& f, i64 M) {
    Poly r{1};
    a = poly_rem_monic(std::move(a), f, M);
    while (e > 0) {
        if (e & 1) r = poly_mulmod(r, a, f, M);
        a = poly_mulmod(a, a, f, M);
        e >>= 1;
    }
    return r;
}

// Monic gcd over Z/p, p prime.
inline Poly poly_gcd_fp(Poly a, Poly b, i64 p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        i64 lead_inv = inv_mod(b.back(), p);
        Poly bm(b.size());
        for (size_t i = 0; i < b.size(); ++i) bm[i] = mod_pos(b[i] * lead_inv, p);
        a = poly_rem_monic(std::move(a), bm, p);
        std::swap(a, b);
    }
    if (!a.empty()) {
        i64 li = inv_mod(a.back(), p);
        for (auto& c : a) c = mod_pos(c * li, p);
    }
    return a;
}

// Divide a by b over F_p (b nonzero), returning (quotient, remainder).
inline std::pair<Poly, Poly> poly_divrem_fp(Poly a, const Poly& b, i64 p) {
    Poly q;
    if (a.size() >= b.size()) q.resize(a.size() - b.size() + 1, 0);
    i64 lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
        i64 c = mod_pos(a.back() * lead_inv, p);
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = mod_pos(a[shift + i] - c * b[i], p);
        poly_trim(a);  // the leading term cancels, so a shrinks every pass
    }
    poly_trim(q);
    return {q, a};
}

// Inverse of a modulo the monic polynomial f over F_p (p prime);
// throws InternalError when gcd(a, f) != 1.
inline Poly poly_invmod_fp(Poly a, const Poly& f, i64 p) {
    a = poly_rem_monic(std::move(a), f, p);
    Poly r0 = f, r1 = a;
    Poly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        auto [q, r2] = poly_divrem_fp(r0, r1, p);
        Poly s2 = poly_sub(s0, poly_mul(q, s1, p), p);
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
    }
    if (r0.size() != 1) throw InternalError("poly_invmod_fp: not invertible");
    i64 gi = inv_mod(r0[0], p);
    for (auto& c : s0) c = mod_pos(c * gi, p);
    return poly_rem_monic(std::move(s0), f, p);
}

// Repeated-Frobenius irreducibility test for a monic degree-m polynomial
// over F_p: f is irreducible iff x^{p^m} = x mod f and
// gcd(x^{p^i} - x, f) = 1 for every 1 <= i <= m/2.
inline bool poly_irreducible_fp(const Poly& f, i64 p) {
    const i64 m = static_cast<i64>(f.size()) - 1;
    if (m < 1) return false;
    if (m == 1) return true;
    Poly xp = poly_powmod(Poly{0, 1}, p, f, p);  // x^p mod f
    Poly xpi = xp;                               // x^{p^i} mod f
    for (i64 i = 1; i <= m; ++i) {
        if (i > 1) {
            // x^{p^i} = (x^{p^{i-1}}) evaluated under x -> x^p, i.e. power it.
            Poly next{1};
            Poly base = xpi;
            // Composition with Frobenius equals raising to the p-th power.
            next = poly_powmod(base, p, f, p);
            xpi = next;
        }
        Poly diff = poly_sub(xpi, Poly{0, 1}, p);
        if (i <= m / 2) {
            Poly g = poly_gcd_fp(diff, f, p);
            if (!(g.size() == 1)) return false;
        } else if (i == m) {
            if (!diff.empty()) return false;
        }
    }
    return true;
}

}  // namespace wittflow::detail
