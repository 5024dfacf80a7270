#include "wittflow/witt_rings.hpp"

#include <map>
#include <mutex>

#include "wittflow/detail/poly_zm.hpp"

namespace wittflow {

using detail::Poly;

namespace {

std::mutex g_ring_cache_mutex;
std::map<std::tuple<i64, i64, i64>, WittRingPtr>& ring_cache() {
    static std::map<std::tuple<i64, i64, i64>, WittRingPtr> cache;
    return cache;
}

// Teichmueller fixed point of y -> y^{p^m} in Z/p^n[x]/(f), starting from y.
// Each p-th power gains at least one digit of precision, so m*(n-1) steps of
// y -> y^p land exactly on the fixed point.
Poly teichmuller_fixed_point(Poly y, const Poly& f, i64 p, i64 n, i64 m) {
    i64 pn = pow_i64(p, n);
    for (i64 step = 0; step < m * (n - 1); ++step)
        y = detail::poly_powmod(y, p, f, pn);
    return y;
}

}  // namespace

WittRing::WittRing(i64 p, i64 n, i64 m) : p_(p), n_(n), m_(m) {
    pn_ = pow_i64(p, n);
    base_ = FqField::create(p, m);

    if (m == 1) {
        modulus_ = {0, 1};
    } else {
        // Provisional presentation with the integer-lifted base modulus.
        Poly f0(base_->modulus().begin(), base_->modulus().end());
        // theta = Teichmueller lift of the class of x.
        Poly theta = teichmuller_fixed_point(Poly{0, 1}, f0, p, n, m);
        // Minimal polynomial of theta over Z/p^n: theta^m = sum c_i theta^i.
        // The matrix [1, theta, ..., theta^{m-1}] is congruent to the
        // identity mod p, so the system solves by p-adic digit lifting with
        // trivial pivoting.
        std::vector<Poly> pows(m + 1);
        pows[0] = Poly{1};
        for (i64 i = 1; i <= m; ++i) pows[i] = detail::poly_mulmod(pows[i - 1], theta, f0, pn_);
        // Solve M c = theta^m where column i of M is pows[i].
        std::vector<std::vector<i64>> M(m, std::vector<i64>(m, 0));
        std::vector<i64> rhs(m, 0);
        for (i64 i = 0; i < m; ++i) {
            const Poly& col = pows[i];
            for (size_t r = 0; r < col.size(); ++r) M[r][i] = col[r];
        }
        for (size_t r = 0; r < pows[m].size(); ++r) rhs[r] = pows[m][r];
        // Gaussian elimination over Z/p^n; all pivots are units because
        // M == I mod p.
        std::vector<std::vector<i64>> aug(m, std::vector<i64>(m + 1));
        for (i64 r = 0; r < m; ++r) {
            for (i64 c = 0; c < m; ++c) aug[r][c] = M[r][c];
            aug[r][m] = rhs[r];
        }
        for (i64 col = 0; col < m; ++col) {
            i64 pr = -1;
            for (i64 r = col; r < m; ++r)
                if (aug[r][col] % p != 0) { pr = r; break; }
            if (pr < 0) throw InternalError("witt ring: singular power matrix");
            std::swap(aug[col], aug[pr]);
            i64 inv = inv_mod(aug[col][col], pn_);
            for (i64 c = 0; c <= m; ++c) aug[col][c] = mod_pos(aug[col][c] * inv, pn_);
            for (i64 r = 0; r < m; ++r) {
                if (r == col || aug[r][col] == 0) continue;
                i64 fmul = aug[r][col];
                for (i64 c = 0; c <= m; ++c)
                    aug[r][c] = mod_pos(aug[r][c] - fmul * aug[col][c], pn_);
            }
        }
        modulus_.assign(m + 1, 0);
        for (i64 i = 0; i < m; ++i) modulus_[i] = mod_pos(-aug[i][m], pn_);
        modulus_[m] = 1;
        // sanity: reduces to the base modulus
        for (i64 i = 0; i <= m; ++i)
            if (mod_pos(modulus_[i], p) != base_->modulus()[i])
                throw InternalError("witt ring: lifted modulus does not reduce to base modulus");
    }
}

WittRingPtr WittRing::create(i64 p, i64 n, i64 m) {
    if (!is_prime_i64(p)) throw InvalidArgument("gr_create: p not prime");
    if (n < 1 || m < 1) throw InvalidArgument("gr_create: n and m must be positive");
    std::lock_guard<std::mutex> lock(g_ring_cache_mutex);
    auto key = std::make_tuple(p, n, m);
    auto it = ring_cache().find(key);
    if (it != ring_cache().end()) return it->second;
    auto ring = WittRingPtr(new WittRing(p, n, m));
    ring_cache().emplace(key, ring);
    // Post-construction pieces that need shared_from_this.
    auto* mut = const_cast<WittRing*>(ring.get());
    // sigma image: g^p, a root of the lifted modulus
    Poly gp = detail::poly_powmod(Poly{0, 1}, p, ring->modulus_, ring->pn_);
    gp.resize(m, 0);
    mut->sigma_image_ = WittElem(ring, std::vector<i64>(gp.begin(), gp.end()));
    // columns of sigma: (g^p)^i
    mut->sigma_matrix_.assign(m, std::vector<i64>(m, 0));
    Poly cur{1};
    for (i64 i = 0; i < m; ++i) {
        for (size_t r = 0; r < cur.size(); ++r) mut->sigma_matrix_[r][i] = cur[r];
        cur = detail::poly_mulmod(cur, gp, ring->modulus_, ring->pn_);
    }
    return ring;
}

i64 WittRing::size() const { return pow_i64(pn_, m_); }

WittElem WittRing::zero() const { return WittElem(shared_from_this(), std::vector<i64>(m_, 0)); }
WittElem WittRing::one() const { return from_int(1); }

WittElem WittRing::from_int(i64 c) const {
    std::vector<i64> v(m_, 0);
    v[0] = mod_pos(c, pn_);
    return WittElem(shared_from_this(), std::move(v));
}

WittElem WittRing::generator() const {
    std::vector<i64> v(m_, 0);
    if (m_ > 1) v[1] = 1;
    return WittElem(shared_from_this(), std::move(v));
}

WittElem WittRing::from_coeffs(std::vector<i64> coeffs) const {
    if (static_cast<i64>(coeffs.size()) > m_) {
        Poly r = detail::poly_rem_monic(Poly(coeffs.begin(), coeffs.end()), modulus_, pn_);
        coeffs.assign(r.begin(), r.end());
    }
    coeffs.resize(m_, 0);
    for (auto& c : coeffs) c = mod_pos(c, pn_);
    return WittElem(shared_from_this(), std::move(coeffs));
}

WittElem WittRing::element(i64 index) const {
    std::vector<i64> v(m_, 0);
    for (i64 i = 0; i < m_; ++i) {
        v[i] = index % pn_;
        index /= pn_;
    }
    return WittElem(shared_from_this(), std::move(v));
}

WittElem WittRing::lift_min(const FqElem& a) const {
    if (!a.field()->same_field(*base_)) throw InvalidArgument("lift_min: wrong base field");
    return WittElem(shared_from_this(), a.coeffs());
}

FqElem WittRing::reduce_to_base(const WittElem& x) const {
    std::vector<i64> v(m_);
    for (i64 i = 0; i < m_; ++i) v[i] = mod_pos(x.coeffs()[i], p_);
    return base_->from_coeffs(std::move(v));
}

bool WittRing::same_ring(const WittRing& o) const {
    return p_ == o.p_ && n_ == o.n_ && m_ == o.m_;
}

WittElem::WittElem(WittRingPtr ring, std::vector<i64> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
    if (static_cast<i64>(coeffs_.size()) != ring_->m())
        throw InvalidArgument("WittElem: wrong coefficient length");
    for (auto& c : coeffs_) c = mod_pos(c, ring_->pn());
}

bool WittElem::is_zero() const {
    for (i64 c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool WittElem::is_one() const {
    if (coeffs_[0] != 1) return false;
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return false;
    return true;
}

bool WittElem::is_unit() const {
    for (i64 c : coeffs_)
        if (c % ring_->p() != 0) return true;
    return false;
}

i64 WittElem::val() const {
    i64 v = ring_->n();
    for (i64 c : coeffs_) v = std::min(v, val_p(c, ring_->p(), ring_->n()));
    return v;
}

i64 WittElem::index() const {
    i64 idx = 0, mul = 1;
    for (i64 c : coeffs_) {
        idx += c * mul;
        mul *= ring_->pn();
    }
    return idx;
}

WittElem WittElem::operator+(const WittElem& o) const {
    if (!ring_->same_ring(*o.ring_)) throw InvalidArgument("WittElem: ring mismatch");
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(coeffs_[i] + o.coeffs_[i], ring_->pn());
    return WittElem(ring_, std::move(v));
}

WittElem WittElem::operator-(const WittElem& o) const {
    if (!ring_->same_ring(*o.ring_)) throw InvalidArgument("WittElem: ring mismatch");
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(coeffs_[i] - o.coeffs_[i], ring_->pn());
    return WittElem(ring_, std::move(v));
}

WittElem WittElem::operator-() const {
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(-coeffs_[i], ring_->pn());
    return WittElem(ring_, std::move(v));
}

WittElem WittElem::operator*(const WittElem& o) const {
    if (!ring_->same_ring(*o.ring_)) throw InvalidArgument("WittElem: ring mismatch");
    Poly r = detail::poly_mulmod(Poly(coeffs_.begin(), coeffs_.end()),
                                 Poly(o.coeffs_.begin(), o.coeffs_.end()),
                                 ring_->lifted_modulus(), ring_->pn());
    r.resize(ring_->m(), 0);
    return WittElem(ring_, std::move(r));
}

bool WittElem::operator==(const WittElem& o) const {
    return ring_->same_ring(*o.ring_) && coeffs_ == o.coeffs_;
}

WittElem WittElem::times_int(i64 c) const {
    std::vector<i64> v(coeffs_.size());
    c = mod_pos(c, ring_->pn());
    for (size_t i = 0; i < v.size(); ++i) v[i] = mod_pos(coeffs_[i] * c, ring_->pn());
    return WittElem(ring_, std::move(v));
}

WittElem WittElem::div_p(i64 k) const {
    i64 pk = pow_i64(ring_->p(), k);
    std::vector<i64> v(coeffs_.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (coeffs_[i] % pk != 0) throw InvalidArgument("div_p: element not divisible");
        v[i] = coeffs_[i] / pk;
    }
    return WittElem(ring_, std::move(v));
}

WittElem WittElem::zero_like() const { return ring_->zero(); }
WittElem WittElem::one_like() const { return ring_->one(); }

WittElem WittElem::inverse() const {
    if (!is_unit()) throw InvalidArgument("WittElem: inverse of non-unit");
    // invert mod p in the residue field, then Newton-lift: y <- y(2 - xy)
    FqElem red = ring_->reduce_to_base(*this);
    WittElem y = ring_->lift_min(red.inverse());
    for (i64 prec = 1; prec < ring_->n(); prec *= 2) {
        WittElem two = ring_->from_int(2);
        y = y * (two - *this * y);
    }
    if (!((*this * y).is_one())) throw InternalError("WittElem: inverse lift failed");
    return y;
}

WittElem WittElem::pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    WittElem r = ring_->one();
    WittElem b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

WittElem sigma(const WittElem& x) {
    const auto& ring = x.ring();
    const auto& M = ring->sigma_matrix_;
    i64 m = ring->m(), pn = ring->pn();
    std::vector<i64> v(m, 0);
    for (i64 j = 0; j < m; ++j) {
        i64 c = x.coeffs()[j];
        if (c == 0) continue;
        for (i64 i = 0; i < m; ++i) v[i] = mod_pos(v[i] + c * M[i][j], pn);
    }
    return WittElem(ring, std::move(v));
}

WittElem sigma_pow(const WittElem& x, i64 k) {
    k = mod_pos(k, x.ring()->m());
    WittElem r = x;
    for (i64 i = 0; i < k; ++i) r = sigma(r);
    return r;
}

WittElem teichmuller(const FqElem& a, const WittRingPtr& ring) {
    if (!a.field()->same_field(*ring->base()))
        throw InvalidArgument("teichmuller: element not in the base field");
    WittElem y = ring->lift_min(a);
    for (i64 step = 0; step < ring->m() * (ring->n() - 1); ++step) y = y.pow(ring->p());
    return y;
}

WittElem reduce_level(const WittElem& x, const WittRingPtr& target) {
    const auto& src = x.ring();
    if (target->p() != src->p() || target->m() != src->m() || target->n() > src->n())
        throw InvalidArgument("reduce_level: incompatible target");
    std::vector<i64> v(x.coeffs());
    for (auto& c : v) c = mod_pos(c, target->pn());
    return WittElem(target, std::move(v));
}

WittEmbedding::WittEmbedding(WittRingPtr src, WittRingPtr dst, WittElem image)
    : src_(std::move(src)), dst_(std::move(dst)), image_(std::move(image)) {
    image_powers_.clear();
    WittElem cur = dst_->one();
    for (i64 i = 0; i < src_->m(); ++i) {
        image_powers_.push_back(cur);
        cur = cur * image_;
    }
}

WittEmbedding WittEmbedding::canonical(const WittRingPtr& src, const WittRingPtr& dst) {
    if (src->p() != dst->p() || src->n() != dst->n())
        throw InvalidArgument("witt embed: mismatched p or level");
    if (dst->m() % src->m() != 0) throw InvalidArgument("witt embed: degree does not divide");
    if (src->m() == 1) return WittEmbedding(src, dst, dst->one());
    auto field_embed = FieldEmbedding::canonical(src->base(), dst->base());
    // Teichmueller lift of the canonical field image: the unique root of the
    // source's lifted modulus above it.
    WittElem image = teichmuller(field_embed.generator_image(), dst);
    return WittEmbedding(src, dst, image);
}

WittElem WittEmbedding::apply(const WittElem& x) const {
    if (!x.ring()->same_ring(*src_)) throw InvalidArgument("witt embed: element not in source");
    WittElem acc = dst_->zero();
    for (i64 i = 0; i < src_->m(); ++i)
        acc = acc + image_powers_[i].times_int(x.coeffs()[i]);
    return acc;
}

std::pair<FqElem, FqElem> to_witt_coords(const WittElem& x) {
    const auto& ring = x.ring();
    if (ring->n() != 2) throw InvalidArgument("to_witt_coords: level 2 only");
    FqElem a0 = ring->reduce_to_base(x);
    WittElem d = x - teichmuller(a0, ring);
    if (d.val() < 1) throw InternalError("to_witt_coords: difference not divisible by p");
    WittElem d1 = d.div_p(1);
    // x = tau(a0) + p tau(a1^{1/p}): the Frobenius twist on the second
    // coordinate is what makes the universal Witt sum polynomial hold.
    FqElem a1 = frobenius(ring->reduce_to_base(d1));
    return {a0, a1};
}

WittElem from_witt_coords(const FqElem& a0, const FqElem& a1, const WittRingPtr& ring) {
    if (ring->n() != 2) throw InvalidArgument("from_witt_coords: level 2 only");
    FqElem a1_untwist = frobenius_pow(a1, ring->m() - 1);  // a1^{1/p}
    return teichmuller(a0, ring) + ring->lift_min(a1_untwist).times_int(ring->p());
}

}  // namespace wittflow
