#include "wittflow/finite_fields.hpp"

#include <map>
#include <mutex>

#include "wittflow/detail/poly_zm.hpp"

namespace wittflow {

using detail::Poly;

namespace {

constexpr i64 kEnumBudget = i64(1) << 20;

// Lexicographically smallest monic irreducible of degree m over F_p, the
// coefficient sequence (c0, ..., c_{m-1}) ordered with c0 most significant.
Poly canonical_modulus(i64 p, i64 m) {
    if (m == 1) return Poly{0, 1};  // x: the prime-field convention
    // Zero constant term means divisibility by x, so lex order effectively
    // starts at c0 = 1.
    std::vector<i64> digits(m, 0);
    digits[0] = 1;
    while (true) {
        Poly f(digits.begin(), digits.end());
        f.push_back(1);
        if (detail::poly_irreducible_fp(f, p)) return f;
        // increment (c0,...,c_{m-1}) lexicographically: last digit fastest
        i64 i = m - 1;
        while (i >= 1 && digits[i] == p - 1) digits[i--] = 0;
        if (i == 0 && digits[0] == p - 1) throw InternalError("no irreducible modulus found");
        ++digits[i];
    }
}

std::mutex g_field_cache_mutex;
std::map<std::pair<i64, i64>, FqFieldPtr>& field_cache() {
    static std::map<std::pair<i64, i64>, FqFieldPtr> cache;
    return cache;
}

}  // namespace

FqField::FqField(i64 p, i64 m, std::vector<i64> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {}

FqFieldPtr FqField::create(i64 p, i64 m) {
    if (!is_prime_i64(p)) throw InvalidArgument("field_create: p = " + std::to_string(p) + " is not prime");
    if (m < 1) throw InvalidArgument("field_create: degree must be >= 1");
    std::lock_guard<std::mutex> lock(g_field_cache_mutex);
    auto key = std::make_pair(p, m);
    auto it = field_cache().find(key);
    if (it != field_cache().end()) return it->second;
    auto fld = FqFieldPtr(new FqField(p, m, canonical_modulus(p, m)));
    field_cache().emplace(key, fld);
    return fld;
}

i64 FqField::size() const { return pow_i64(p_, m_); }

bool FqField::enumerable() const {
    i64 s = 1;
    for (i64 i = 0; i < m_; ++i) {
        s *= p_;
        if (s > kEnumBudget) return false;
    }
    return true;
}

FqElem FqField::zero() const { return FqElem(shared_from_this(), std::vector<i64>(m_, 0)); }

FqElem FqField::one() const { return from_int(1); }

FqElem FqField::from_int(i64 c) const {
    std::vector<i64> v(m_, 0);
    v[0] = mod_pos(c, p_);
    return FqElem(shared_from_this(), std::move(v));
}

FqElem FqField::generator() const {
    // Class of the variable x. For m = 1 the modulus is x, so this is 0;
    // callers never use positive generator powers in the prime field.
    std::vector<i64> v(m_, 0);
    if (m_ > 1) v[1] = 1;
    return FqElem(shared_from_this(), std::move(v));
}

FqElem FqField::element(i64 index) const {
    if (index < 0 || index >= size()) throw InvalidArgument("element index out of range");
    std::vector<i64> v(m_, 0);
    for (i64 i = 0; i < m_; ++i) {
        v[i] = index % p_;
        index /= p_;
    }
    return FqElem(shared_from_this(), std::move(v));
}

FqElem FqField::from_coeffs(std::vector<i64> coeffs) const {
    if (static_cast<i64>(coeffs.size()) > m_) {
        Poly r = detail::poly_rem_monic(Poly(coeffs.begin(), coeffs.end()), modulus_, p_);
        coeffs.assign(r.begin(), r.end());
    }
    coeffs.resize(m_, 0);
    for (auto& c : coeffs) c = mod_pos(c, p_);
    return FqElem(shared_from_this(), std::move(coeffs));
}

bool FqField::same_field(const FqField& o) const {
    return p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_;
}

FqElem::FqElem(FqFieldPtr field, std::vector<i64> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (static_cast<i64>(coeffs_.size()) != field_->m())
        throw InvalidArgument("FqElem: wrong coefficient length");
    for (auto& c : coeffs_) c = mod_pos(c, field_->p());
}

bool FqElem::is_zero() const {
    for (i64 c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool FqElem::is_one() const {
    if (coeffs_[0] != 1) return false;
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return false;
    return true;
}

i64 FqElem::index() const {
    i64 idx = 0, mul = 1;
    for (i64 c : coeffs_) {
        idx += c * mul;
        mul *= field_->p();
    }
    return idx;
}

FqElem FqElem::operator+(const FqElem& o) const {
    if (!field_->same_field(*o.field_)) throw InvalidArgument("FqElem: field mismatch");
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(coeffs_[i] + o.coeffs_[i], field_->p());
    return FqElem(field_, std::move(v));
}

FqElem FqElem::operator-(const FqElem& o) const {
    if (!field_->same_field(*o.field_)) throw InvalidArgument("FqElem: field mismatch");
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(coeffs_[i] - o.coeffs_[i], field_->p());
    return FqElem(field_, std::move(v));
}

FqElem FqElem::operator-() const {
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(-coeffs_[i], field_->p());
    return FqElem(field_, std::move(v));
}

FqElem FqElem::operator*(const FqElem& o) const {
    if (!field_->same_field(*o.field_)) throw InvalidArgument("FqElem: field mismatch");
    Poly r = detail::poly_mulmod(Poly(coeffs_.begin(), coeffs_.end()),
                                 Poly(o.coeffs_.begin(), o.coeffs_.end()),
                                 field_->modulus(), field_->p());
    r.resize(field_->m(), 0);
    return FqElem(field_, std::move(r));
}

bool FqElem::operator==(const FqElem& o) const {
    return field_->same_field(*o.field_) && coeffs_ == o.coeffs_;
}

FqElem FqElem::pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    FqElem r = field_->one();
    FqElem b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

FqElem FqElem::inverse() const {
    if (is_zero()) throw InvalidArgument("FqElem: inverse of zero");
    Poly inv = detail::poly_invmod_fp(Poly(coeffs_.begin(), coeffs_.end()),
                                      field_->modulus(), field_->p());
    inv.resize(field_->m(), 0);
    return FqElem(field_, std::move(inv));
}

FqElem FqElem::zero_like() const { return field_->zero(); }
FqElem FqElem::one_like() const { return field_->one(); }

FqElem frobenius(const FqElem& x) { return x.pow(x.field()->p()); }

FqElem frobenius_pow(const FqElem& x, i64 k) {
    i64 m = x.field()->m();
    k = mod_pos(k, m);
    FqElem r = x;
    for (i64 i = 0; i < k; ++i) r = frobenius(r);
    return r;
}

namespace {

// Evaluate a polynomial with F_p coefficients at a point of dst.
FqElem eval_fp_poly(const std::vector<i64>& poly, const FqElem& at) {
    auto dst = at.field();
    FqElem acc = dst->zero();
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        acc = acc * at + dst->from_int(*it);
    return acc;
}

// Basis of the subfield F_{p^d} inside dst, computed as the kernel of
// Frobenius^d - id acting F_p-linearly on the power basis. Works in fields
// far beyond the enumeration budget as long as p^d itself is small.
std::vector<FqElem> subfield_basis(const FqFieldPtr& dst, i64 d) {
    const i64 p = dst->p(), m = dst->m();
    // columns of the Frobenius matrix: (x^j)^p = (x^p)^j
    Poly xp = detail::poly_powmod(Poly{0, 1}, p, dst->modulus(), p);
    std::vector<std::vector<i64>> frob(m, std::vector<i64>(m, 0));  // frob[i][j]
    Poly cur{1};
    for (i64 j = 0; j < m; ++j) {
        for (size_t i = 0; i < cur.size(); ++i) frob[i][j] = cur[i];
        cur = detail::poly_mulmod(cur, xp, dst->modulus(), p);
    }
    // frob^d
    auto matmul = [&](const std::vector<std::vector<i64>>& A, const std::vector<std::vector<i64>>& B) {
        std::vector<std::vector<i64>> C(m, std::vector<i64>(m, 0));
        for (i64 i = 0; i < m; ++i)
            for (i64 k = 0; k < m; ++k) {
                if (A[i][k] == 0) continue;
                for (i64 j = 0; j < m; ++j)
                    C[i][j] = mod_pos(C[i][j] + A[i][k] * B[k][j], p);
            }
        return C;
    };
    std::vector<std::vector<i64>> M = frob;
    for (i64 k = 1; k < d; ++k) M = matmul(M, frob);
    for (i64 i = 0; i < m; ++i) M[i][i] = mod_pos(M[i][i] - 1, p);
    // kernel of M over F_p
    i64 row = 0;
    std::vector<i64> pivot_of_col(m, -1);
    for (i64 col = 0; col < m && row < m; ++col) {
        i64 pr = -1;
        for (i64 r = row; r < m; ++r)
            if (M[r][col] != 0) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(M[row], M[pr]);
        i64 inv = inv_mod(M[row][col], p);
        for (i64 k2 = 0; k2 < m; ++k2) M[row][k2] = mod_pos(M[row][k2] * inv, p);
        for (i64 r = 0; r < m; ++r) {
            if (r == row || M[r][col] == 0) continue;
            i64 f = M[r][col];
            for (i64 k2 = 0; k2 < m; ++k2) M[r][k2] = mod_pos(M[r][k2] - f * M[row][k2], p);
        }
        pivot_of_col[col] = row;
        ++row;
    }
    std::vector<FqElem> basis;
    for (i64 col = 0; col < m; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<i64> v(m, 0);
        v[col] = 1;
        for (i64 c2 = 0; c2 < m; ++c2)
            if (pivot_of_col[c2] >= 0) v[c2] = mod_pos(-M[pivot_of_col[c2]][col], p);
        basis.push_back(dst->from_coeffs(std::move(v)));
    }
    return basis;
}

}  // namespace

std::vector<FqElem> roots_in_field(const std::vector<i64>& modulus_over_fp, const FqFieldPtr& dst) {
    const i64 deg = static_cast<i64>(modulus_over_fp.size()) - 1;
    std::vector<FqElem> roots;
    if (deg == 1) {
        roots.push_back(-dst->from_int(modulus_over_fp[0]));
        return roots;
    }
    // Roots of a degree-d polynomial over F_p all lie in the copy of
    // F_{p^gcd(d,m)} inside dst; sweep exactly that copy.
    const i64 g = gcd_i64(deg, dst->m());
    i64 count = pow_i64(dst->p(), g);
    if (count > (i64(1) << 20))
        throw BudgetError("roots_in_field: source field too large to sweep");
    auto basis = subfield_basis(dst, g);
    if (static_cast<i64>(basis.size()) != g)
        throw InternalError("roots_in_field: subfield of unexpected dimension");
    for (i64 idx = 0; idx < count; ++idx) {
        FqElem cand = dst->zero();
        i64 rem = idx;
        for (i64 b = 0; b < g; ++b) {
            i64 digit = rem % dst->p();
            rem /= dst->p();
            if (digit != 0) cand = cand + dst->from_int(digit) * basis[b];
        }
        if (eval_fp_poly(modulus_over_fp, cand).is_zero()) roots.push_back(cand);
    }
    std::sort(roots.begin(), roots.end(),
              [](const FqElem& a, const FqElem& b) { return a.index() < b.index(); });
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](const FqElem& a, const FqElem& b) { return a == b; }),
                roots.end());
    return roots;
}

FieldEmbedding::FieldEmbedding(FqFieldPtr src, FqFieldPtr dst, FqElem image)
    : src_(std::move(src)), dst_(std::move(dst)), image_(std::move(image)) {}

FieldEmbedding FieldEmbedding::canonical(const FqFieldPtr& src, const FqFieldPtr& dst) {
    if (dst->p() != src->p()) throw InvalidArgument("embed: different characteristics");
    if (dst->m() % src->m() != 0)
        throw InvalidArgument("embed: source degree does not divide target degree");
    if (src->m() == 1) {
        // unique embedding of the prime field; generator convention is 1
        return FieldEmbedding(src, dst, dst->one());
    }
    auto roots = roots_in_field(src->modulus(), dst);
    if (roots.empty()) throw InternalError("embed: no root of source modulus in target");
    return FieldEmbedding(src, dst, roots.front());
}

FieldEmbedding FieldEmbedding::with_generator_image(FqFieldPtr src, FqFieldPtr dst, FqElem image) {
    return FieldEmbedding(std::move(src), std::move(dst), std::move(image));
}

FqElem FieldEmbedding::apply(const FqElem& x) const {
    if (!x.field()->same_field(*src_)) throw InvalidArgument("embed: element not in source field");
    if (src_->m() == 1) return dst_->from_int(x.coeffs()[0]);
    FqElem acc = dst_->zero();
    const auto& cs = x.coeffs();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it)
        acc = acc * image_ + dst_->from_int(*it);
    return acc;
}

}  // namespace wittflow
