#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wittflow {

using i64 = std::int64_t;

// A configured cap was hit (extension degree, group order, enumeration size).
// The computation is abandoned, not wrong.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sound-but-incomplete search ran out of search space (curve-case
// isomorphism search). Distinct from BudgetError so the CLI can map it to
// its own exit code.
class InconclusiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structural invariant failed (Newton divergence on etale input, broken
// canonical form). Always a bug or corrupted input, never a user error.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Invalid argument at an API boundary (non-prime p, degree 0, base mismatch).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline i64 pow_i64(i64 base, i64 exp) {
    i64 r = 1;
    for (i64 i = 0; i < exp; ++i) {
        if (r > (int64_t(1) << 62) / (base > 0 ? base : 1))
            throw BudgetError("pow_i64 overflow: " + std::to_string(base) + "^" + std::to_string(exp));
        r *= base;
    }
    return r;
}

inline bool is_prime_i64(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// Inverse of a mod m for gcd(a, m) = 1; throws InternalError otherwise.
inline i64 inv_mod(i64 a, i64 m) {
    a = mod_pos(a, m);
    i64 g = m, x = 0, x1 = 1, a1 = a;
    while (a1 != 0) {
        i64 q = g / a1;
        g -= q * a1;
        std::swap(g, a1);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw InternalError("inv_mod: non-invertible " + std::to_string(a) + " mod " + std::to_string(m));
    return mod_pos(x, m);
}

inline i64 gcd_i64(i64 a, i64 b) {
    while (b) { a %= b; std::swap(a, b); }
    return a < 0 ? -a : a;
}

inline i64 lcm_i64(i64 a, i64 b) { return a / gcd_i64(a, b) * b; }

// p-adic valuation of x in Z/p^n; val(0) = n by convention.
inline i64 val_p(i64 x, i64 p, i64 n) {
    if (x == 0) return n;
    i64 v = 0;
    while (x % p == 0 && v < n) { x /= p; ++v; }
    return v;
}

}  // namespace wittflow
