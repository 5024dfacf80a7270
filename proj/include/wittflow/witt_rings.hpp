#pragma once

// The truncated Witt ring W_n(F_{p^m}) realized as the Galois ring
// GR(p^n, m) = Z/p^n[x]/(h), where h is the canonical Hensel lift of the
// base field's modulus: the unique monic degree-m polynomial over Z/p^n that
// reduces to it and whose roots are Teichmueller units. In this presentation
// the class of x is itself the Teichmueller lift of the base generator, sigma
// acts by g -> g^p exactly, and reduction to lower truncation level is
// coefficient-wise.

#include <memory>
#include <vector>

#include "wittflow/finite_fields.hpp"

namespace wittflow {

class WittRing;
using WittRingPtr = std::shared_ptr<const WittRing>;

class WittElem {
public:
    WittElem() = default;
    WittElem(WittRingPtr ring, std::vector<i64> coeffs);

    const WittRingPtr& ring() const { return ring_; }
    // Length-m coefficients in the power basis of the ring generator,
    // constant term first, entries in [0, p^n).
    const std::vector<i64>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;  // nonzero mod p
    i64 val() const;       // p-adic valuation, n for zero
    i64 index() const;     // enumeration position, base p^n digits

    WittElem operator+(const WittElem& o) const;
    WittElem operator-(const WittElem& o) const;
    WittElem operator-() const;
    WittElem operator*(const WittElem& o) const;
    bool operator==(const WittElem& o) const;
    bool operator!=(const WittElem& o) const { return !(*this == o); }

    WittElem inverse() const;  // unit inverse, throws InvalidArgument otherwise
    WittElem pow(i64 e) const;

    WittElem times_int(i64 c) const;
    // Exact division by p^k; requires val() >= k. The quotient's top k digits
    // are set to zero (minimal lift convention).
    WittElem div_p(i64 k) const;
    WittElem zero_like() const;
    WittElem one_like() const;

private:
    WittRingPtr ring_;
    std::vector<i64> coeffs_;
};

class WittRing : public std::enable_shared_from_this<WittRing> {
public:
    // W_n(F_{p^m}) with the canonical lifted modulus. Cached per (p, n, m).
    static WittRingPtr create(i64 p, i64 n, i64 m);

    i64 p() const { return p_; }
    i64 n() const { return n_; }
    i64 m() const { return m_; }
    i64 pn() const { return pn_; }  // p^n
    const FqFieldPtr& base() const { return base_; }
    // Monic degree-m modulus over Z/p^n, constant term first, length m+1.
    const std::vector<i64>& lifted_modulus() const { return modulus_; }
    // Image of the generator under sigma (= generator^p reduced).
    const WittElem& sigma_image() const { return sigma_image_; }

    i64 size() const;  // p^{nm}, throws BudgetError on overflow

    WittElem zero() const;
    WittElem one() const;
    WittElem from_int(i64 c) const;
    WittElem generator() const;
    WittElem from_coeffs(std::vector<i64> coeffs) const;
    WittElem element(i64 index) const;

    // Coefficient-wise minimal lift of a base-field element.
    WittElem lift_min(const FqElem& a) const;
    // Reduction to the base field (n' = 1).
    FqElem reduce_to_base(const WittElem& x) const;

    bool same_ring(const WittRing& o) const;

private:
    WittRing(i64 p, i64 n, i64 m);

    i64 p_, n_, m_, pn_;
    FqFieldPtr base_;
    std::vector<i64> modulus_;
    WittElem sigma_image_;
    // columns of sigma as a Z/p^n-linear map in the power basis
    std::vector<std::vector<i64>> sigma_matrix_;

    friend WittElem sigma(const WittElem&);
};

// The Witt-vector Frobenius: ring automorphism with sigma == (x -> x^p) mod p
// and sigma^m = id.
WittElem sigma(const WittElem& x);
WittElem sigma_pow(const WittElem& x, i64 k);

// The unique multiplicative section of W_n(F_q) -> F_q.
WittElem teichmuller(const FqElem& a, const WittRingPtr& ring);

// Reduction W_n -> W_{n'} for n' <= n (surjective ring homomorphism,
// commutes with sigma and with teichmuller).
WittElem reduce_level(const WittElem& x, const WittRingPtr& target);

// Hensel lift of the canonical field embedding F_{p^a} -> F_{p^b} to
// GR(p^n, a) -> GR(p^n, b).
class WittEmbedding {
public:
    static WittEmbedding canonical(const WittRingPtr& src, const WittRingPtr& dst);
    const WittRingPtr& src() const { return src_; }
    const WittRingPtr& dst() const { return dst_; }
    const WittElem& generator_image() const { return image_; }
    WittElem apply(const WittElem& x) const;

private:
    WittEmbedding(WittRingPtr src, WittRingPtr dst, WittElem image);
    WittRingPtr src_, dst_;
    WittElem image_;
    std::vector<WittElem> image_powers_;
};

// Witt-coordinate oracle, truncation level n = 2 only: x = tau(a0) + p*lift(a1).
std::pair<FqElem, FqElem> to_witt_coords(const WittElem& x);
WittElem from_witt_coords(const FqElem& a0, const FqElem& a1, const WittRingPtr& ring);

}  // namespace wittflow
