#include "wittflow/flows.hpp"

#include <algorithm>

namespace wittflow {

PeriodicFlow PeriodicFlow::point(WittRingPtr ring, i64 period, WittMat A,
                                 std::optional<i64> base_degree) {
    PeriodicFlow f;
    i64 bd = base_degree.value_or(ring->m());
    if (ring->m() % bd != 0) throw InvalidArgument("flow: base degree must divide m");
    f.base_ = PointBase{ring, bd};
    f.rank_ = A.rows();
    f.period_ = period;
    if (A.rows() != A.cols() || A.rows() == 0) throw InvalidArgument("flow: A must be square");
    if (!A.det().is_unit()) throw InvalidArgument("flow: twist matrix must be invertible");
    f.A_ = std::move(A);
    return f;
}

PeriodicFlow PeriodicFlow::curve(LaurentAlgebraPtr alg, FrobeniusLift lift, i64 period, LaurentMat A,
                                 std::optional<i64> base_degree) {
    PeriodicFlow f;
    i64 bd = base_degree.value_or(alg->coeffs()->m());
    if (alg->coeffs()->m() % bd != 0) throw InvalidArgument("flow: base degree must divide m");
    f.base_ = CurveBase{alg, std::move(lift), bd};
    f.rank_ = A.rows();
    f.period_ = period;
    if (A.rows() != A.cols() || A.rows() == 0) throw InvalidArgument("flow: A must be square");
    if (!A.det().is_unit()) throw InvalidArgument("flow: twist matrix must be invertible");
    f.A_ = std::move(A);
    return f;
}

const WittRingPtr& PeriodicFlow::witt_ring() const {
    if (is_point()) return point_base().ring;
    return curve_base().algebra->coeffs();
}

i64 PeriodicFlow::level() const { return witt_ring()->n(); }

WittMat PeriodicFlow::twist_point(const WittMat& U) const {
    return U.map([&](const WittElem& x) { return sigma_pow(x, period_); });
}

LaurentMat PeriodicFlow::twist_curve(const LaurentMat& U) const {
    const auto& cb = curve_base();
    return U.map([&](const LaurentElem& x) { return cb.lift.apply_pow(x, period_); });
}

bool PeriodicFlow::operator==(const PeriodicFlow& o) const {
    if (is_point() != o.is_point() || rank_ != o.rank_ || period_ != o.period_) return false;
    if (is_point()) return A_point() == o.A_point();
    return A_curve() == o.A_curve() && curve_base().lift == o.curve_base().lift;
}

PeriodicFlow shift(const PeriodicFlow& flow) {
    if (flow.is_point()) {
        WittMat A = flow.A_point().map([](const WittElem& x) { return sigma(x); });
        return PeriodicFlow::point(flow.point_base().ring, flow.period(), std::move(A),
                                   flow.point_base().base_degree);
    }
    const auto& cb = flow.curve_base();
    LaurentMat A = flow.A_curve().map([&](const LaurentElem& x) { return cb.lift.apply(x); });
    return PeriodicFlow::curve(cb.algebra, cb.lift, flow.period(), std::move(A), cb.base_degree);
}

PeriodicFlow shift_pow(const PeriodicFlow& flow, i64 k) {
    PeriodicFlow cur = flow;
    for (i64 i = 0; i < k; ++i) cur = shift(cur);
    return cur;
}

PeriodicFlow galois_pullback(const PeriodicFlow& flow, i64 sigma_power) {
    i64 bd = flow.is_point() ? flow.point_base().base_degree : flow.curve_base().base_degree;
    if (mod_pos(sigma_power, bd) != 0)
        throw InvalidArgument("galois_pullback: automorphism does not fix the declared base");
    if (flow.is_point()) {
        WittMat A = flow.A_point().map([&](const WittElem& x) { return sigma_pow(x, sigma_power); });
        return PeriodicFlow::point(flow.point_base().ring, flow.period(), std::move(A), bd);
    }
    const auto& cb = flow.curve_base();
    LaurentMat A = flow.A_curve().map([&](const LaurentElem& x) {
        return map_coeffs(x, [&](const WittElem& c) { return sigma_pow(c, sigma_power); }, cb.algebra);
    });
    return PeriodicFlow::curve(cb.algebra, cb.lift, flow.period(), std::move(A), bd);
}

PeriodicFlow reduce_flow(const PeriodicFlow& flow, i64 target_level) {
    auto src_ring = flow.witt_ring();
    auto target = WittRing::create(src_ring->p(), target_level, src_ring->m());
    if (flow.is_point()) {
        WittMat A = flow.A_point().map([&](const WittElem& x) { return reduce_level(x, target); });
        return PeriodicFlow::point(target, flow.period(), std::move(A), flow.point_base().base_degree);
    }
    const auto& cb = flow.curve_base();
    auto alg2 = LaurentAlgebra::create(target);
    LaurentMat A = reduce_laurent_mat(flow.A_curve(), alg2);
    return PeriodicFlow::curve(alg2, reduce_lift(cb.lift, alg2), flow.period(), std::move(A),
                               cb.base_degree);
}

PeriodicFlow tensor_point_flows(const PeriodicFlow& a, const PeriodicFlow& b) {
    if (!a.is_point() || !b.is_point()) throw InvalidArgument("tensor: point flows only");
    if (a.period() != b.period()) throw InvalidArgument("tensor: periods differ");
    auto ring = a.point_base().ring;
    const auto& A = a.A_point();
    const auto& B = b.A_point();
    i64 ra = A.rows(), rb = B.rows();
    WittMat K(ra * rb, ra * rb, ring->zero());
    for (i64 i = 0; i < ra; ++i)
        for (i64 j = 0; j < ra; ++j)
            for (i64 k = 0; k < rb; ++k)
                for (i64 l = 0; l < rb; ++l) K.at(i * rb + k, j * rb + l) = A.at(i, j) * B.at(k, l);
    return PeriodicFlow::point(ring, a.period(), std::move(K));
}

bool check_iso_witness(const PeriodicFlow& a, const PeriodicFlow& b, const FlowIsoWitness& w) {
    if (a.is_point()) {
        const auto& U = std::get<WittMat>(w.U);
        if (!U.det().is_unit()) return false;
        WittMat lhs = U * b.A_point();
        WittMat rhs = a.A_point() * a.twist_point(U);
        return lhs == rhs;
    }
    const auto& U = std::get<LaurentMat>(w.U);
    if (!U.det().is_unit()) return false;
    LaurentMat lhs = U * b.A_curve();
    LaurentMat rhs = a.A_curve() * a.twist_curve(U);
    return lhs == rhs;
}

namespace {

// Point case: the solution space of U A2 = A1 sigma^f(U) is a Z/p^n-module;
// a witness is an invertible element of it. Invertibility only depends on
// the mod-p reduction, so scanning F_p-combinations of a generating set is a
// complete search.
IsoResult iso_point(const PeriodicFlow& a, const PeriodicFlow& b, const IsoOptions& opts) {
    auto ring = a.point_base().ring;
    const i64 r = a.rank(), m = ring->m(), n = ring->n(), p = ring->p();
    auto z = WittRing::create(p, n, 1);
    const i64 dim = r * r * m;  // Z/p^n-coordinates of U

    auto unflatten = [&](const std::vector<WittElem>& v) {
        WittMat U(r, r, ring->zero());
        for (i64 i = 0; i < r; ++i)
            for (i64 j = 0; j < r; ++j) {
                std::vector<i64> cs(m);
                for (i64 c = 0; c < m; ++c) cs[c] = v[(i * r + j) * m + c].coeffs()[0];
                U.at(i, j) = ring->from_coeffs(std::move(cs));
            }
        return U;
    };

    // matrix of the Z/p^n-linear map U -> U A2 - A1 sigma^f(U)
    std::vector<std::vector<WittElem>> L(dim, std::vector<WittElem>(dim, z->zero()));
    for (i64 col = 0; col < dim; ++col) {
        std::vector<WittElem> basis_vec(dim, z->zero());
        basis_vec[col] = z->one();
        WittMat U = unflatten(basis_vec);
        WittMat img = U * b.A_point() - a.A_point() * a.twist_point(U);
        for (i64 i = 0; i < r; ++i)
            for (i64 j = 0; j < r; ++j)
                for (i64 c = 0; c < m; ++c)
                    L[(i * r + j) * m + c][col] = z->from_int(img.at(i, j).coeffs()[c]);
    }
    WittLinearSystem sys{std::move(L)};
    auto kernel = sys.kernel();
    if (kernel.empty()) return {IsoResult::Verdict::kNotIsomorphic, std::nullopt, "Hom space is zero"};

    const i64 gens = static_cast<i64>(kernel.size());
    // enumerate F_p-combinations of the generators
    i64 total = 1;
    for (i64 i = 0; i < gens; ++i) {
        total *= p;
        if (total > opts.combo_budget)
            return {IsoResult::Verdict::kInconclusive, std::nullopt, "combination budget exceeded"};
    }
    for (i64 mask = 1; mask < total; ++mask) {
        std::vector<WittElem> v(dim, z->zero());
        i64 rem = mask;
        for (i64 g = 0; g < gens; ++g) {
            i64 cg = rem % p;
            rem /= p;
            if (cg == 0) continue;
            for (i64 d = 0; d < dim; ++d) v[d] = v[d] + kernel[g][d].times_int(cg);
        }
        WittMat U = unflatten(v);
        if (U.det().is_unit()) {
            FlowIsoWitness w{U};
            if (!check_iso_witness(a, b, w)) throw InternalError("iso_point: invalid witness");
            return {IsoResult::Verdict::kIsomorphic, w, ""};
        }
    }
    return {IsoResult::Verdict::kNotIsomorphic, std::nullopt,
            "no invertible element in the Hom module"};
}

IsoResult iso_curve(const PeriodicFlow& a, const PeriodicFlow& b, const IsoOptions& opts) {
    auto alg = a.curve_base().algebra;
    auto ring = alg->coeffs();
    const i64 r = a.rank();
    // U = C t^k with C an invertible constant matrix, |k| <= monomial_degree
    i64 tried = 0;
    for (i64 k = -opts.monomial_degree; k <= opts.monomial_degree; ++k) {
        // enumerate C over invertible matrices with entries from the ring
        i64 total = 1;
        bool overflow = false;
        for (i64 i = 0; i < r * r; ++i) {
            total *= ring->size();
            if (total > opts.unit_budget) { overflow = true; break; }
        }
        if (overflow)
            return {IsoResult::Verdict::kInconclusive, std::nullopt, "constant matrix budget exceeded"};
        for (i64 idx = 0; idx < total; ++idx) {
            ++tried;
            if (tried > opts.unit_budget)
                return {IsoResult::Verdict::kInconclusive, std::nullopt, "search budget exceeded"};
            WittMat C(r, r, ring->zero());
            i64 rem = idx;
            for (i64 i = 0; i < r; ++i)
                for (i64 j = 0; j < r; ++j) {
                    C.at(i, j) = ring->element(rem % ring->size());
                    rem /= ring->size();
                }
            if (!C.det().is_unit()) continue;
            LaurentMat U(r, r, alg->zero());
            for (i64 i = 0; i < r; ++i)
                for (i64 j = 0; j < r; ++j) U.at(i, j) = alg->term(C.at(i, j), k);
            FlowIsoWitness w{U};
            if (check_iso_witness(a, b, w)) return {IsoResult::Verdict::kIsomorphic, w, ""};
        }
    }
    return {IsoResult::Verdict::kInconclusive, std::nullopt, "unit-monomial search exhausted"};
}

}  // namespace

IsoResult iso_flows(const PeriodicFlow& a, const PeriodicFlow& b, const IsoOptions& opts) {
    if (a.is_point() != b.is_point() || a.rank() != b.rank() || a.period() != b.period() ||
        a.level() != b.level())
        throw InvalidArgument("iso_flows: mismatched shapes");
    if (a == b) {
        FlowIsoWitness w;
        if (a.is_point())
            w.U = witt_identity(a.rank(), a.point_base().ring);
        else
            w.U = laurent_identity(a.rank(), a.curve_base().algebra);
        return {IsoResult::Verdict::kIsomorphic, w, "equal flows"};
    }
    return a.is_point() ? iso_point(a, b, opts) : iso_curve(a, b, opts);
}

ModuleWithConnection flow_connection(const PeriodicFlow& flow) {
    if (flow.is_point()) throw InvalidArgument("flow_connection: curve flows only");
    const auto& cb = flow.curve_base();
    LaurentMat theta = canonical_connection(flow.A_curve(), cb.lift, flow.period());
    return ModuleWithConnection{cb.algebra, flow.rank(), theta};
}

DiagramChain expand_diagram(const PeriodicFlow& flow) {
    DiagramChain chain;
    chain.period = flow.period();
    chain.flow = flow;
    if (!flow.is_point()) {
        auto E = flow_connection(flow);
        const auto& cb = flow.curve_base();
        for (i64 i = 1; i <= flow.period(); ++i)
            chain.de_rham_terms.push_back(frobenius_pullback_connection_pow(E, cb.lift, i));
    }
    return chain;
}

}  // namespace wittflow
