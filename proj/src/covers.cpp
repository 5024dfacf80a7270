#include "wittflow/covers.hpp"

#include <algorithm>

namespace wittflow {

namespace {

// Can g be written as h^p - h with h in the Laurent algebra (level 1)?
// Solvable h have support controlled by g's, so a windowed exact solve is
// complete; used for the Artin-Schreier connectedness flag.
bool as_split(const LaurentAlgebraPtr& alg1, const LaurentElem& g) {
    const i64 p = alg1->p();
    i64 lo = 0, hi = 0;
    if (!g.is_zero()) {
        lo = std::min<i64>(0, g.min_exp());
        hi = std::max<i64>(0, g.max_exp());
    }
    // h^p has exponents p*e; any cancellation happens against h itself, so
    // supp(h) stays within [lo, hi] once |e| > max(|lo|,|hi|) is impossible.
    i64 w = std::max(std::abs(lo), std::abs(hi)) + 1;
    auto ring = alg1->coeffs();
    const i64 m = ring->m();
    const i64 span = 2 * w + 1;
    // unknowns: coefficients of h over F_q basis; equation h^p - h = g is
    // F_p-linear in h
    const i64 unknowns = span * m;
    const i64 out_w = p * w + 1;
    const i64 out_span = 2 * out_w + 1;
    FpMat A(p, out_span * m, unknowns);
    std::vector<i64> b(out_span * m, 0);
    for (i64 e = -w; e <= w; ++e)
        for (i64 c = 0; c < m; ++c) {
            std::vector<i64> coeffs(m, 0);
            coeffs[c] = 1;
            auto basis_elem = ring->base()->from_coeffs(coeffs);
            // (x t^e)^p = x^p t^{pe}
            auto xp = frobenius(basis_elem);
            i64 col = (e + w) * m + c;
            for (i64 i = 0; i < m; ++i) {
                A.at((p * e + out_w) * m + i, col) =
                    mod_pos(A.at((p * e + out_w) * m + i, col) + xp.coeffs()[i], p);
                A.at((e + out_w) * m + i, col) =
                    mod_pos(A.at((e + out_w) * m + i, col) - (i == c ? 1 : 0), p);
            }
        }
    for (const auto& [e, cc] : g.terms()) {
        if (e < -out_w || e > out_w) return false;  // unreachable exponent
        auto red = cc.ring()->reduce_to_base(cc);
        for (i64 i = 0; i < m; ++i) b[(e + out_w) * m + i] = red.coeffs()[i];
    }
    return fp_solve(A, b).has_value();
}

}  // namespace

EtaleCoverSpec EtaleCoverSpec::kummer(LaurentAlgebraPtr base1, i64 N) {
    if (base1->n() != 1) throw InvalidArgument("cover spec: base must be at level 1");
    if (N < 1 || gcd_i64(N, base1->p()) != 1)
        throw InvalidArgument("kummer cover: N must be positive and prime to p");
    i64 q = base1->coeffs()->size();
    if ((q - 1) % N != 0)
        throw InvalidArgument("kummer cover: mu_N is not contained in F_q");
    EtaleCoverSpec spec;
    spec.base1_ = base1;
    spec.layers_.push_back({CoverLayer::Kind::kKummer, N, base1->t(1)});
    // first primitive N-th root of unity in enumeration order
    auto fld = base1->coeffs()->base();
    bool found = false;
    for (i64 i = 1; i < fld->size() && !found; ++i) {
        auto z = fld->element(i);
        if (z.is_zero()) continue;
        bool prim = !z.pow(N).is_one() ? false : true;
        if (prim)
            for (i64 d = 1; d < N; ++d)
                if (z.pow(d).is_one()) { prim = false; break; }
        if (prim) {
            spec.zeta_ = z;
            found = true;
        }
    }
    if (!found && N > 1) throw InternalError("kummer cover: no primitive root found");
    if (N == 1) spec.zeta_ = fld->one();
    spec.connected_ = true;  // X^N - t stays irreducible over F_qbar(t)
    return spec;
}

EtaleCoverSpec EtaleCoverSpec::artin_schreier(LaurentAlgebraPtr base1, LaurentElem g) {
    if (base1->n() != 1) throw InvalidArgument("cover spec: base must be at level 1");
    EtaleCoverSpec spec;
    spec.base1_ = base1;
    spec.zeta_ = base1->coeffs()->base()->one();
    spec.connected_ = !as_split(base1, g);
    spec.layers_.push_back({CoverLayer::Kind::kArtinSchreier, base1->p(), std::move(g)});
    return spec;
}

EtaleCoverSpec EtaleCoverSpec::then_artin_schreier(LaurentElem g) const {
    EtaleCoverSpec spec = *this;
    // connectedness of the new layer is checked over the base only: if g is
    // not split over the base it is recorded as connected; splitting that
    // only happens over the lower cover is not detected here and the flag
    // stays conservative for catalogued uses.
    bool layer_connected = !as_split(base1_, g);
    spec.connected_ = connected_ && layer_connected;
    spec.layers_.push_back({CoverLayer::Kind::kArtinSchreier, base1_->p(), std::move(g)});
    return spec;
}

i64 EtaleCoverSpec::degree() const {
    i64 d = 1;
    for (const auto& l : layers_) d *= l.degree;
    return d;
}

std::vector<i64> EtaleCoverSpec::group_shape() const {
    std::vector<i64> s;
    for (const auto& l : layers_) s.push_back(l.degree);
    return s;
}

// ---------------------------------------------------------------------------

CoverElem::CoverElem(LiftedCoverPtr cover, std::vector<LaurentElem> coords)
    : cover_(std::move(cover)), coords_(std::move(coords)) {
    if (static_cast<i64>(coords_.size()) != cover_->degree())
        throw InvalidArgument("CoverElem: wrong coordinate length");
}

bool CoverElem::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

bool CoverElem::is_one() const {
    if (!coords_[0].is_one()) return false;
    for (size_t i = 1; i < coords_.size(); ++i)
        if (!coords_[i].is_zero()) return false;
    return true;
}

CoverElem CoverElem::operator+(const CoverElem& o) const {
    auto c = coords_;
    for (size_t i = 0; i < c.size(); ++i) c[i] = c[i] + o.coords_[i];
    return CoverElem(cover_, std::move(c));
}

CoverElem CoverElem::operator-(const CoverElem& o) const { return *this + (-o); }

CoverElem CoverElem::operator-() const {
    auto c = coords_;
    for (auto& x : c) x = -x;
    return CoverElem(cover_, std::move(c));
}

CoverElem CoverElem::operator*(const CoverElem& o) const {
    const auto& cov = *cover_;
    const i64 L = cov.layer_count();
    CoverElem acc = cover_->zero();
    std::vector<i64> ea(L), eb(L);
    for (i64 ia = 0; ia < cov.degree(); ++ia) {
        if (coords_[ia].is_zero()) continue;
        i64 ra = ia;
        for (i64 l = 0; l < L; ++l) { ea[l] = ra % cov.layers()[l].degree; ra /= cov.layers()[l].degree; }
        for (i64 ib = 0; ib < cov.degree(); ++ib) {
            if (o.coords_[ib].is_zero()) continue;
            i64 rb = ib;
            for (i64 l = 0; l < L; ++l) { eb[l] = rb % cov.layers()[l].degree; rb /= cov.layers()[l].degree; }
            std::vector<i64> es(L);
            for (i64 l = 0; l < L; ++l) es[l] = ea[l] + eb[l];
            acc = acc + cov.reduce_monomial(es, coords_[ia] * o.coords_[ib]);
        }
    }
    return acc;
}

bool CoverElem::operator==(const CoverElem& o) const {
    for (size_t i = 0; i < coords_.size(); ++i)
        if (!(coords_[i] == o.coords_[i])) return false;
    return true;
}

CoverElem CoverElem::pow(i64 e) const {
    CoverElem r = cover_->one();
    CoverElem b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

CoverElem CoverElem::scaled(const LaurentElem& c) const {
    auto cs = coords_;
    for (auto& x : cs) x = x * c;
    return CoverElem(cover_, std::move(cs));
}

CoverElem CoverElem::zero_like() const { return cover_->zero(); }
CoverElem CoverElem::one_like() const { return cover_->one(); }

i64 CoverElem::val() const {
    i64 v = cover_->base()->n();
    for (const auto& c : coords_) v = std::min(v, c.val());
    return v;
}

CoverElem CoverElem::div_p(i64 k) const {
    auto cs = coords_;
    for (auto& x : cs) x = x.div_p(k);
    return CoverElem(cover_, std::move(cs));
}

// ---------------------------------------------------------------------------

CoverElem LiftedCover::reduce_monomial(const std::vector<i64>& exps, const LaurentElem& coeff) const {
    // Reduce each layer exponent below its degree. Kummer u^N = t lowers the
    // exponent by N at the cost of one t; Artin-Schreier u^p = u + g expands.
    const i64 L = layer_count();
    for (i64 l = 0; l < L; ++l) {
        if (exps[l] < layers_[l].degree) continue;
        if (layers_[l].kind == CoverLayer::Kind::kKummer) {
            std::vector<i64> e2 = exps;
            i64 drop = exps[l] / layers_[l].degree;
            e2[l] = exps[l] % layers_[l].degree;
            return reduce_monomial(e2, coeff * layers_[l].rhs.pow(drop));
        }
        // u^{e} = (u + g) u^{e-p}
        std::vector<i64> e2 = exps;
        e2[l] = exps[l] - layers_[l].degree + 1;
        std::vector<i64> e3 = exps;
        e3[l] = exps[l] - layers_[l].degree;
        return reduce_monomial(e2, coeff) + reduce_monomial(e3, coeff * layers_[l].rhs);
    }
    std::vector<LaurentElem> coords(degree_, base_->zero());
    i64 idx = 0;
    for (i64 l = L - 1; l >= 0; --l) idx = idx * layers_[l].degree + exps[l];
    coords[idx] = coeff;
    return CoverElem(shared_from_this(), std::move(coords));
}

CoverElem LiftedCover::zero() const {
    return CoverElem(shared_from_this(), std::vector<LaurentElem>(degree_, base_->zero()));
}

CoverElem LiftedCover::one() const {
    std::vector<LaurentElem> c(degree_, base_->zero());
    c[0] = base_->one();
    return CoverElem(shared_from_this(), std::move(c));
}

CoverElem LiftedCover::from_base(const LaurentElem& x) const {
    std::vector<LaurentElem> c(degree_, base_->zero());
    c[0] = x;
    return CoverElem(shared_from_this(), std::move(c));
}

CoverElem LiftedCover::generator(i64 layer) const {
    // a degree-1 layer's variable coincides with its right-hand side
    if (layers_[layer].degree == 1) return from_base(layers_[layer].rhs);
    std::vector<LaurentElem> c(degree_, base_->zero());
    c[strides_[layer]] = base_->one();
    return CoverElem(shared_from_this(), std::move(c));
}

namespace {

// y <- y (2 - x y) doubles the precision of an approximate inverse.
CoverElem newton_inverse(const CoverElem& x, const CoverElem& seed, i64 n) {
    CoverElem y = seed;
    for (i64 prec = 1; prec < n; prec *= 2) {
        CoverElem two = x.one_like() + x.one_like();
        y = y * (two - x * y);
    }
    if (!(x * y).is_one()) throw InternalError("cover: Newton inverse failed");
    return y;
}

}  // namespace

LiftedCoverPtr LiftedCover::lift(const EtaleCoverSpec& spec, i64 level, const FrobeniusLift& F) {
    if (!F.algebra()->coeffs()->same_ring(*WittRing::create(spec.base()->p(), level,
                                                            spec.base()->coeffs()->m())))
        throw InvalidArgument("cover lift: Frobenius lift level does not match");
    auto cover = std::shared_ptr<LiftedCover>(new LiftedCover());
    cover->spec_ = spec;
    cover->level_ = level;
    cover->base_ = F.algebra();
    cover->F_ = F;
    cover->degree_ = spec.degree();
    // lift layer data coefficient-wise (minimal lifts)
    auto ring_n = cover->base_->coeffs();
    for (const auto& l : spec.layers()) {
        LaurentElem rhs_n = map_coeffs(
            l.rhs, [&](const WittElem& c) { return ring_n->lift_min(c.ring()->reduce_to_base(c)); },
            cover->base_);
        if (l.kind == CoverLayer::Kind::kKummer) rhs_n = cover->base_->t(1);
        cover->layers_.push_back({l.kind, l.degree, rhs_n});
    }
    cover->strides_.resize(cover->layers_.size());
    i64 stride = 1;
    for (size_t l = 0; l < cover->layers_.size(); ++l) {
        cover->strides_[l] = stride;
        stride *= cover->layers_[l].degree;
    }

    const i64 p = spec.base()->p();
    // Frobenius images per layer, by Newton from u^p through the levels.
    for (i64 l = 0; l < cover->layer_count(); ++l) {
        CoverElem u = cover->generator(l);
        CoverElem x = u.pow(p);  // exact at level 1
        const auto& layer = cover->layers_[l];
        if (layer.kind == CoverLayer::Kind::kKummer) {
            // solve X^N = F(t), X = u^p mod p
            LaurentElem target = F.apply(cover->base_->t(1));
            CoverElem tgt = cover->from_base(target);
            // h(X) = X^N - tgt, h'(X) = N X^{N-1}; inverse seeded by the
            // closed form mod p: (N u^{p(N-1)})^{-1} = N^{-1} t^{-p(N-1) overN...}
            for (i64 step = 1; step < level; ++step) {
                CoverElem h = x.pow(layer.degree) - tgt;
                CoverElem hp = x.pow(layer.degree - 1).scaled(cover->base_->one().times_int(layer.degree));
                // seed: inverse of hp mod p. hp = N u^{p(N-1)} mod p;
                // u^{-1} = u^{N-1} t^{-1}.
                CoverElem u_inv_modp = u.pow(layer.degree - 1).scaled(cover->base_->t(-1));
                CoverElem seed =
                    u_inv_modp.pow(p * (layer.degree - 1)).scaled(cover->base_->one().times_int(inv_mod(layer.degree, ring_n->pn())));
                CoverElem hp_inv = newton_inverse(hp, seed, level);
                x = x - h * hp_inv;
            }
            if (!(x.pow(layer.degree) == tgt)) throw InternalError("cover lift: Kummer Frobenius image wrong");
        } else {
            // solve X^p - X = F(g), X = u^p mod p
            LaurentElem target = F.apply(layer.rhs);
            CoverElem tgt = cover->from_base(target);
            for (i64 step = 1; step < level; ++step) {
                CoverElem h = x.pow(p) - x - tgt;
                // h'(X) = p X^{p-1} - 1, inverse mod p is -1
                CoverElem hp = x.pow(p - 1).scaled(cover->base_->one().times_int(p)) - cover->one();
                CoverElem hp_inv = newton_inverse(hp, -cover->one(), level);
                x = x - h * hp_inv;
            }
            if (!(x.pow(p) - x == tgt)) throw InternalError("cover lift: AS Frobenius image wrong");
        }
        cover->frob_images_.push_back(x);
    }

    // Galois images per layer and generator power.
    for (i64 l = 0; l < cover->layer_count(); ++l) {
        CoverElem u = cover->generator(l);
        const auto& layer = cover->layers_[l];
        std::vector<CoverElem> powers;
        if (layer.kind == CoverLayer::Kind::kKummer) {
            WittElem zeta_lift = teichmuller(spec.kummer_root(), ring_n);
            for (i64 a = 0; a < layer.degree; ++a)
                powers.push_back(u.scaled(cover->base_->constant(zeta_lift.pow(a))));
        } else {
            // gamma^a: u -> root of X^p - X = g with X = u + a mod p
            CoverElem tgt = cover->from_base(layer.rhs);
            for (i64 a = 0; a < p; ++a) {
                CoverElem x = u + cover->one().scaled(cover->base_->one().times_int(a));
                for (i64 step = 1; step < level; ++step) {
                    CoverElem h = x.pow(p) - x - tgt;
                    CoverElem hp = x.pow(p - 1).scaled(cover->base_->one().times_int(p)) - cover->one();
                    CoverElem hp_inv = newton_inverse(hp, -cover->one(), level);
                    x = x - h * hp_inv;
                }
                if (!(x.pow(p) - x == tgt)) throw InternalError("cover lift: AS Galois image wrong");
                powers.push_back(x);
            }
        }
        cover->galois_powers_.push_back(std::move(powers));
    }
    return cover;
}

CoverElem LiftedCover::frobenius(const CoverElem& x) const {
    // coefficients through the base lift, monomials through the layer images
    CoverElem acc = zero();
    const i64 L = layer_count();
    std::vector<i64> e(L);
    for (i64 i = 0; i < degree_; ++i) {
        if (x.coords()[i].is_zero()) continue;
        i64 r = i;
        for (i64 l = 0; l < L; ++l) { e[l] = r % layers_[l].degree; r /= layers_[l].degree; }
        CoverElem term = from_base(F_->apply(x.coords()[i]));
        for (i64 l = 0; l < L; ++l)
            if (e[l] > 0) term = term * frob_images_[l].pow(e[l]);
        acc = acc + term;
    }
    return acc;
}

CoverElem LiftedCover::frobenius_pow(const CoverElem& x, i64 s) const {
    CoverElem r = x;
    for (i64 i = 0; i < s; ++i) r = frobenius(r);
    return r;
}

CoverElem LiftedCover::galois_act(const CoverGroupElem& g, const CoverElem& x) const {
    CoverElem acc = zero();
    const i64 L = layer_count();
    std::vector<i64> e(L);
    for (i64 i = 0; i < degree_; ++i) {
        if (x.coords()[i].is_zero()) continue;
        i64 r = i;
        for (i64 l = 0; l < L; ++l) { e[l] = r % layers_[l].degree; r /= layers_[l].degree; }
        CoverElem term = from_base(x.coords()[i]);
        for (i64 l = 0; l < L; ++l) {
            if (e[l] == 0) continue;
            const CoverElem& img = galois_powers_[l][mod_pos(g.idx[l], static_cast<i64>(galois_powers_[l].size()))];
            term = term * img.pow(e[l]);
        }
        acc = acc + term;
    }
    return acc;
}

CoverElem LiftedCover::constant_sigma(const CoverElem& x, i64 k) const {
    auto cs = x.coords();
    for (auto& c : cs)
        c = map_coeffs(c, [&](const WittElem& w) { return sigma_pow(w, k); }, base_);
    return CoverElem(shared_from_this(), std::move(cs));
}

std::vector<CoverGroupElem> LiftedCover::group_elements() const {
    std::vector<CoverGroupElem> out;
    const i64 L = layer_count();
    std::vector<i64> idx(L, 0);
    while (true) {
        out.push_back({idx});
        i64 l = 0;
        while (l < L) {
            i64 order = layers_[l].kind == CoverLayer::Kind::kKummer ? layers_[l].degree
                                                                     : base_->p();
            if (++idx[l] < order) break;
            idx[l] = 0;
            ++l;
        }
        if (l == L) break;
        if (L == 0) break;
    }
    if (L == 0) out = {CoverGroupElem{{}}};
    return out;
}

CoverGroupElem LiftedCover::group_identity() const {
    return CoverGroupElem{std::vector<i64>(layer_count(), 0)};
}

CoverElem cover_derivative(const CoverElem& x) {
    auto cover = x.cover();
    auto base = cover->base();
    const i64 L = cover->layer_count();
    const i64 p = base->p();
    // derivatives of the layer variables
    std::vector<CoverElem> du;
    for (i64 l = 0; l < L; ++l) {
        const auto& layer = cover->layers()[l];
        CoverElem u = cover->generator(l);
        if (layer.kind == CoverLayer::Kind::kKummer) {
            // u' = N^{-1} u^{1-N} = N^{-1} (u^{N-1} t^{-1})^{N-1}
            i64 N = layer.degree;
            CoverElem uinv = u.pow(N - 1).scaled(base->t(-1));
            du.push_back(uinv.pow(N - 1).scaled(
                base->one().times_int(inv_mod(N, pow_i64(p, base->n())))));
        } else {
            // (p u^{p-1} - 1) u' = g'
            CoverElem h = u.pow(p - 1).scaled(base->one().times_int(p)) - cover->one();
            CoverElem hinv = h;  // seed -1, Newton
            {
                CoverElem y = -cover->one();
                for (i64 prec = 1; prec < base->n(); prec *= 2) {
                    CoverElem two = cover->one() + cover->one();
                    y = y * (two - h * y);
                }
                if (!(h * y).is_one()) throw InternalError("cover_derivative: inverse failed");
                hinv = y;
            }
            du.push_back(hinv * cover->from_base(layer.rhs.derivative()));
        }
    }
    // product rule over the monomial basis
    CoverElem acc = cover->zero();
    std::vector<i64> e(L);
    for (i64 i = 0; i < cover->degree(); ++i) {
        const LaurentElem& c = x.coords()[i];
        if (c.is_zero()) continue;
        i64 r = i;
        for (i64 l = 0; l < L; ++l) { e[l] = r % cover->layers()[l].degree; r /= cover->layers()[l].degree; }
        // c'(t) * mon
        CoverElem mon = cover->one();
        for (i64 l = 0; l < L; ++l)
            if (e[l] > 0) mon = mon * cover->generator(l).pow(e[l]);
        acc = acc + mon.scaled(c.derivative());
        // c * d(mon)
        for (i64 l = 0; l < L; ++l) {
            if (e[l] == 0) continue;
            CoverElem term = cover->from_base(c).scaled(base->one().times_int(e[l]));
            term = term * cover->generator(l).pow(e[l] - 1) * du[l];
            for (i64 l2 = 0; l2 < L; ++l2)
                if (l2 != l && e[l2] > 0) term = term * cover->generator(l2).pow(e[l2]);
            acc = acc + term;
        }
    }
    return acc;
}

CoverElem reduce_cover_elem(const CoverElem& x, const LiftedCoverPtr& target) {
    std::vector<LaurentElem> cs;
    for (const auto& c : x.coords()) cs.push_back(reduce_laurent(c, target->base()));
    return CoverElem(target, std::move(cs));
}

}  // namespace wittflow
