#pragma once

// Exact arithmetic in F_{p^m}, canonical embeddings between such fields, and
// the p-power Frobenius. Fields are presented as F_p[x]/(modulus) with the
// lexicographically smallest monic irreducible modulus (coefficients read
// constant term first), so every construction is deterministic across runs.

#include <memory>
#include <vector>

#include "wittflow/common.hpp"

namespace wittflow {

class FqField;
using FqFieldPtr = std::shared_ptr<const FqField>;

class FqElem {
public:
    FqElem() = default;
    FqElem(FqFieldPtr field, std::vector<i64> coeffs);

    const FqFieldPtr& field() const { return field_; }
    // Length-m coefficient vector in the power basis of the generator,
    // constant term first, entries in [0, p).
    const std::vector<i64>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_one() const;
    // Position in the fixed element-enumeration order:
    // index = c0 + c1*p + ... + c_{m-1}*p^{m-1}.
    i64 index() const;

    FqElem operator+(const FqElem& o) const;
    FqElem operator-(const FqElem& o) const;
    FqElem operator-() const;
    FqElem operator*(const FqElem& o) const;
    bool operator==(const FqElem& o) const;
    bool operator!=(const FqElem& o) const { return !(*this == o); }

    FqElem inverse() const;  // throws InvalidArgument on zero
    FqElem pow(i64 e) const; // e may be negative for nonzero elements

    FqElem zero_like() const;
    FqElem one_like() const;
    bool is_unit() const { return !is_zero(); }

private:
    FqFieldPtr field_;
    std::vector<i64> coeffs_;
};

// x -> x^p, the absolute Frobenius of the field.
FqElem frobenius(const FqElem& x);
FqElem frobenius_pow(const FqElem& x, i64 k);

class FqField : public std::enable_shared_from_this<FqField> {
public:
    // Canonical field with p^m elements. Cached: repeated calls return the
    // same object.
    static FqFieldPtr create(i64 p, i64 m);

    i64 p() const { return p_; }
    i64 m() const { return m_; }
    // Monic degree-m modulus over F_p, length m+1, constant term first.
    // For m = 1 this is x itself, so the field is F_p.
    const std::vector<i64>& modulus() const { return modulus_; }

    // p^m; throws BudgetError when it does not fit the enumeration budget.
    i64 size() const;
    bool enumerable() const;

    FqElem zero() const;
    FqElem one() const;
    FqElem from_int(i64 c) const;     // image of c mod p
    FqElem generator() const;         // class of x
    FqElem element(i64 index) const;  // enumeration order
    FqElem from_coeffs(std::vector<i64> coeffs) const;

    bool same_field(const FqField& o) const;

private:
    FqField(i64 p, i64 m, std::vector<i64> modulus);

    i64 p_, m_;
    std::vector<i64> modulus_;

    friend class FqElem;
};

// Canonical embedding F_{p^a} -> F_{p^b} for a | b: the source generator maps
// to the first root of the source modulus in the target, roots ordered by the
// target's element enumeration. Composable along divisibility chains through
// the prime field.
class FieldEmbedding {
public:
    static FieldEmbedding canonical(const FqFieldPtr& src, const FqFieldPtr& dst);
    // Embedding sending the source generator to a chosen root (used to
    // enumerate all deg(src) embeddings in tests).
    static FieldEmbedding with_generator_image(FqFieldPtr src, FqFieldPtr dst, FqElem image);

    const FqFieldPtr& src() const { return src_; }
    const FqFieldPtr& dst() const { return dst_; }
    const FqElem& generator_image() const { return image_; }

    FqElem apply(const FqElem& x) const;

private:
    FieldEmbedding(FqFieldPtr src, FqFieldPtr dst, FqElem image);
    FqFieldPtr src_, dst_;
    FqElem image_;
};

// All roots in dst of a monic degree-d polynomial over F_p, sorted by
// enumeration index. The search sweeps the copy of F_{p^d} inside dst, so it
// stays cheap even when dst itself is far beyond the enumeration budget.
std::vector<FqElem> roots_in_field(const std::vector<i64>& modulus_over_fp, const FqFieldPtr& dst);

}  // namespace wittflow
