#pragma once

// The coordinate ring R_n = W_n(F_q)[t, t^{-1}] of the punctured line, its
// derivation d/dt, and Frobenius lifts F with F(t) = t^p mod p acting as
// sigma on coefficients.

#include <utility>
#include <vector>

#include "wittflow/linalg.hpp"
#include "wittflow/witt_rings.hpp"

namespace wittflow {

class LaurentAlgebra;
using LaurentAlgebraPtr = std::shared_ptr<const LaurentAlgebra>;

class LaurentElem {
public:
    LaurentElem() = default;
    LaurentElem(LaurentAlgebraPtr alg, std::vector<std::pair<i64, WittElem>> terms);

    const LaurentAlgebraPtr& algebra() const { return alg_; }
    // sorted by exponent, no zero coefficients
    const std::vector<std::pair<i64, WittElem>>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    // unit test: the mod-p reduction is a single monomial with unit coefficient
    bool is_unit() const;
    i64 min_exp() const;  // throws on zero
    i64 max_exp() const;
    i64 val() const;  // p-adic valuation of the coefficient ideal; n for zero

    LaurentElem operator+(const LaurentElem& o) const;
    LaurentElem operator-(const LaurentElem& o) const;
    LaurentElem operator-() const;
    LaurentElem operator*(const LaurentElem& o) const;
    bool operator==(const LaurentElem& o) const;
    bool operator!=(const LaurentElem& o) const { return !(*this == o); }

    LaurentElem inverse() const;  // unit inverse via finite geometric series
    LaurentElem pow(i64 e) const;

    LaurentElem derivative() const;      // d/dt
    LaurentElem scaled(const WittElem& c) const;
    LaurentElem times_int(i64 c) const;
    LaurentElem div_p(i64 k) const;      // exact division by p^k
    WittElem coeff(i64 exp) const;       // 0 if absent

    LaurentElem zero_like() const;
    LaurentElem one_like() const;

private:
    LaurentAlgebraPtr alg_;
    std::vector<std::pair<i64, WittElem>> terms_;
    void normalize();
};

class LaurentAlgebra : public std::enable_shared_from_this<LaurentAlgebra> {
public:
    static LaurentAlgebraPtr create(WittRingPtr coeffs);

    const WittRingPtr& coeffs() const { return coeffs_; }
    i64 p() const { return coeffs_->p(); }
    i64 n() const { return coeffs_->n(); }

    LaurentElem zero() const;
    LaurentElem one() const;
    LaurentElem t(i64 exp = 1) const;
    LaurentElem term(const WittElem& c, i64 exp) const;
    LaurentElem from_terms(std::vector<std::pair<i64, WittElem>> terms) const;
    LaurentElem constant(const WittElem& c) const;

    bool same_algebra(const LaurentAlgebra& o) const;

private:
    explicit LaurentAlgebra(WittRingPtr coeffs) : coeffs_(std::move(coeffs)) {}
    WittRingPtr coeffs_;
};

// Apply a coefficient-ring map (sigma power, reduction, embedding) termwise.
LaurentElem map_coeffs(const LaurentElem& x, const std::function<WittElem(const WittElem&)>& f,
                       const LaurentAlgebraPtr& target);

// A lift F of absolute Frobenius: F(t) given by a Laurent polynomial
// congruent to t^p mod p, coefficients transformed by sigma.
class FrobeniusLift {
public:
    FrobeniusLift(LaurentAlgebraPtr alg, LaurentElem image_of_t);

    // the standard lift F(t) = t^p
    static FrobeniusLift standard(const LaurentAlgebraPtr& alg);

    const LaurentAlgebraPtr& algebra() const { return alg_; }
    const LaurentElem& image_of_t() const { return image_; }

    LaurentElem apply(const LaurentElem& x) const;
    // x under F^s
    LaurentElem apply_pow(const LaurentElem& x, i64 s) const;
    // F^s(t) as an element
    LaurentElem image_pow(i64 s) const;

    bool operator==(const FrobeniusLift& o) const;

private:
    LaurentAlgebraPtr alg_;
    LaurentElem image_;
    LaurentElem image_inv_;
};

using LaurentMat = Mat<LaurentElem>;

inline LaurentMat laurent_identity(i64 r, const LaurentAlgebraPtr& alg) {
    return LaurentMat::identity(r, alg->one());
}

inline LaurentMat laurent_mat_inverse(const LaurentMat& a) {
    return a.inverse([](const LaurentElem& x) { return x.inverse(); });
}

inline bool laurent_mat_invertible(const LaurentMat& a) { return a.det().is_unit(); }

LaurentMat laurent_mat_map(const LaurentMat& a, const std::function<LaurentElem(const LaurentElem&)>& f);

// entry-wise derivative
LaurentMat laurent_mat_derivative(const LaurentMat& a);

// reduce every coefficient to a lower truncation level
LaurentElem reduce_laurent(const LaurentElem& x, const LaurentAlgebraPtr& target);
LaurentMat reduce_laurent_mat(const LaurentMat& a, const LaurentAlgebraPtr& target);
FrobeniusLift reduce_lift(const FrobeniusLift& F, const LaurentAlgebraPtr& target);

}  // namespace wittflow
