#include "wittflow/connections.hpp"

#include <algorithm>

namespace wittflow {

ModuleWithConnection ModuleWithConnection::flat(const LaurentAlgebraPtr& alg, i64 rank) {
    return ModuleWithConnection{alg, rank, LaurentMat(rank, rank, alg->zero())};
}

LaurentMat nabla_apply(const ModuleWithConnection& M, const LaurentMat& columns) {
    return laurent_mat_derivative(columns) + M.theta * columns;
}

ModuleWithConnection frobenius_pullback_connection(const ModuleWithConnection& M, const FrobeniusLift& F) {
    if (!M.base->same_algebra(*F.algebra()))
        throw InvalidArgument("frobenius_pullback_connection: base mismatch");
    LaurentElem dF = F.image_of_t().derivative();
    if (dF.val() < 1 && !dF.is_zero())
        throw InternalError("frobenius_pullback_connection: dF not divisible by p");
    LaurentMat theta = M.theta.map([&](const LaurentElem& x) { return F.apply(x) * dF; });
    return ModuleWithConnection{M.base, M.rank, theta};
}

ModuleWithConnection frobenius_pullback_connection_pow(const ModuleWithConnection& M,
                                                       const FrobeniusLift& F, i64 s) {
    ModuleWithConnection cur = M;
    for (i64 i = 0; i < s; ++i) cur = frobenius_pullback_connection(cur, F);
    return cur;
}

LaurentMat canonical_connection(const LaurentMat& A, const FrobeniusLift& F, i64 period) {
    auto alg = F.algebra();
    const i64 n = alg->n();
    LaurentMat Ainv = laurent_mat_inverse(A);
    LaurentElem dFf = F.image_pow(period).derivative();
    LaurentMat dA = laurent_mat_derivative(A);
    // Theta = (A * dFf * F^f(Theta) - dA) * A^{-1}; the right-hand side
    // multiplies Theta by an element of pR, so iterating from the level-one
    // value converges in n steps.
    LaurentMat theta = (LaurentMat(A.rows(), A.cols(), alg->zero()) - dA) * Ainv;
    for (i64 it = 0; it < n; ++it) {
        LaurentMat twisted = theta.map([&](const LaurentElem& x) { return F.apply_pow(x, period) * dFf; });
        LaurentMat next = (A * twisted - dA) * Ainv;
        if (next == theta) break;
        theta = next;
    }
    return theta;
}

namespace {

// factorials' p-adic bookkeeping: c_m = p^m / m! = p^{v_m} u_m with u_m a
// unit mod p^n
struct FactorialTracker {
    i64 p, pn, n;
    i64 v = 0;
    i64 u = 1;  // unit mod p^n
    void step(i64 m) {
        // multiply by p / m
        i64 mm = m, vm = 0;
        while (mm % p == 0) { mm /= p; ++vm; }
        v += 1 - vm;
        if (v < 0) throw InternalError("transport series: p-valuation went negative");
        u = mod_pos(u * inv_mod(mm, pn), pn);
    }
};

// min of v_{m'} = m' - v_p(m'!) over m' >= m (worst case the analytic lower
// bound for p >= 3 takes over quickly; for p = 2 the min is 1 forever).
i64 tail_min_valuation(i64 p, i64 m, i64 n) {
    if (p == 2) return std::min<i64>(1, n);
    i64 best = n;
    for (i64 mm = m; mm < m + 4 * n + 8; ++mm) {
        // v_p(mm!) = (mm - digitsum)/ (p-1) <= mm/(p-1)
        i64 vp = 0, x = mm, acc = 0;
        (void)x;
        i64 f = p;
        while (f <= mm) { vp += mm / f; if (f > mm / p) break; f *= p; }
        acc = mm - vp;
        best = std::min(best, acc);
    }
    // beyond the window v is at least m(p-2)/(p-1), already >= n for the
    // m where we would consult this
    return best;
}

bool mat_divisible(const LaurentMat& M, i64 k) {
    for (i64 i = 0; i < M.rows(); ++i)
        for (i64 j = 0; j < M.cols(); ++j)
            if (M.at(i, j).val() < k) return false;
    return true;
}

}  // namespace

LaurentMat taylor_transport(const ModuleWithConnection& M, const FrobeniusLift& F,
                            const FrobeniusLift& Fprime, i64 s, NablaConvention convention,
                            i64 term_bound) {
    auto alg = M.base;
    const i64 p = alg->p(), n = alg->n();
    const i64 r = M.rank;

    LaurentElem delta = F.image_pow(s) - Fprime.image_pow(s);
    if (!delta.is_zero() && delta.val() < 1)
        throw InternalError("taylor_transport: F^s(t) - F'^s(t) not divisible by p");
    LaurentElem delta_over_p = delta.is_zero() ? alg->zero() : delta.div_p(1);

    // nabla-power matrices: M_0 = I, M_{k+1} = d/dt M_k + Theta M_k
    LaurentMat nabla_pow = laurent_identity(r, alg);
    LaurentMat delta_pow = laurent_identity(r, alg);  // (delta/p)^m as scalar matrix times
    LaurentElem delta_scalar_pow = alg->one();

    FactorialTracker fact{p, alg->coeffs()->pn(), n};

    LaurentMat total(r, r, alg->zero());
    i64 nonzero_terms = 0;
    for (i64 m = 0;; ++m) {
        if (m > 0) {
            fact.step(m);
            delta_scalar_pow = delta_scalar_pow * delta_over_p;
            nabla_pow = nabla_apply(M, nabla_pow);
        }
        LaurentMat nabla_term = nabla_pow;
        if (convention == NablaConvention::kLiftOfReduction && m > 0) {
            // replace entries by the minimal lift of their mod p^{n-1}
            // reduction: admissible because the prefactor lies in pR
            nabla_term = nabla_term.map([&](const LaurentElem& x) {
                std::vector<std::pair<i64, WittElem>> t2;
                i64 pn1 = pow_i64(p, n - 1);
                for (const auto& [e, c] : x.terms()) {
                    std::vector<i64> cs = c.coeffs();
                    for (auto& cc : cs) cc = mod_pos(cc, pn1);
                    t2.emplace_back(e, c.ring()->from_coeffs(std::move(cs)));
                }
                return alg->from_terms(std::move(t2));
            });
        }
        // term = p^{v} u (delta/p)^m F'^s(nabla^m)
        i64 scale = fact.v >= n ? 0 : pow_i64(p, fact.v) * fact.u;
        if (scale != 0) {
            LaurentElem factor = delta_scalar_pow.times_int(scale);
            LaurentMat term = nabla_term.map([&](const LaurentElem& x) {
                return Fprime.apply_pow(x, s) * factor;
            });
            bool zero = true;
            for (i64 i = 0; i < r && zero; ++i)
                for (i64 j = 0; j < r; ++j)
                    if (!term.at(i, j).is_zero()) { zero = false; break; }
            if (!zero) {
                total = total + term;
                ++nonzero_terms;
            }
        }
        // sound stop: every later term carries p^{w} with w = tail min
        // valuation, and the nabla matrix is absorbingly divisible
        i64 w = tail_min_valuation(p, m + 1, n);
        if (w >= n) break;
        if (mat_divisible(nabla_pow, n - w)) break;
        if (m >= term_bound) {
            if (p == 2)
                throw NonTerminatingError("taylor_transport: series exceeded term bound (p = 2)");
            throw InternalError("taylor_transport: series exceeded term bound");
        }
    }
    (void)nonzero_terms;
    return total;
}

FlatBasisResult flat_sections(const ModuleWithConnection& M, i64 window) {
    auto alg = M.base;
    auto ring = alg->coeffs();
    const i64 r = M.rank;
    const i64 pn = pow_i64(alg->p(), alg->n());
    i64 theta_spread = 1;
    for (i64 i = 0; i < r; ++i)
        for (i64 j = 0; j < r; ++j)
            if (!M.theta.at(i, j).is_zero())
                theta_spread = std::max<i64>(theta_spread,
                                             std::max(std::abs(M.theta.at(i, j).min_exp()),
                                                      std::abs(M.theta.at(i, j).max_exp())));
    if (window <= 0) window = pn + theta_spread + 2;

    // unknowns: coefficient of t^e in row i of a column vector x,
    // e in [-window, window]
    const i64 span = 2 * window + 1;
    const i64 unknowns = span * r;
    const i64 out_window = window + theta_spread + 1;
    const i64 out_span = 2 * out_window + 1;
    const i64 equations = out_span * r;

    auto ucol = [&](i64 e, i64 i) { return (e + window) * r + i; };
    auto erow = [&](i64 e, i64 i) { return (e + out_window) * r + i; };

    std::vector<std::vector<WittElem>> A(equations, std::vector<WittElem>(unknowns, ring->zero()));
    // d/dt: coefficient c at exponent e contributes e*c at exponent e-1
    for (i64 e = -window; e <= window; ++e)
        for (i64 i = 0; i < r; ++i)
            A[erow(e - 1, i)][ucol(e, i)] = A[erow(e - 1, i)][ucol(e, i)] + ring->from_int(e);
    // Theta x: (Theta)_{ij} t^{d} maps coefficient (e, j) to (e + d, i)
    for (i64 i = 0; i < r; ++i)
        for (i64 j = 0; j < r; ++j)
            for (const auto& [d, c] : M.theta.at(i, j).terms())
                for (i64 e = -window; e <= window; ++e)
                    A[erow(e + d, i)][ucol(e, j)] = A[erow(e + d, i)][ucol(e, j)] + c;

    WittLinearSystem sys{std::move(A)};
    auto kernel = sys.kernel();

    auto to_column = [&](const std::vector<WittElem>& flat) {
        LaurentMat col(r, 1, alg->zero());
        for (i64 e = -window; e <= window; ++e)
            for (i64 i = 0; i < r; ++i) {
                const WittElem& c = flat[ucol(e, i)];
                if (!c.is_zero()) col.at(i, 0) = col.at(i, 0) + alg->term(c, e);
            }
        return col;
    };

    std::vector<LaurentMat> candidates;
    for (const auto& k : kernel) {
        auto col = to_column(k);
        bool zero = true;
        for (i64 i = 0; i < r; ++i)
            if (!col.at(i, 0).is_zero()) zero = false;
        if (!zero) candidates.push_back(col);
    }

    FlatBasisResult res;
    if (static_cast<i64>(candidates.size()) < r) {
        res.reason = "NotFlatlyTrivial: kernel has fewer than rank independent sections";
        return res;
    }

    // try r-subsets of candidates, then pairwise sums, looking for a unit det
    auto try_basis = [&](const std::vector<i64>& idx) -> bool {
        LaurentMat B(r, r, alg->zero());
        for (i64 j = 0; j < r; ++j)
            for (i64 i = 0; i < r; ++i) B.at(i, j) = candidates[idx[j]].at(i, 0);
        if (!B.det().is_unit()) return false;
        res.found = true;
        res.basis = B;
        return true;
    };
    const i64 k = static_cast<i64>(candidates.size());
    std::vector<i64> idx(r);
    std::function<bool(i64, i64)> rec = [&](i64 pos, i64 start) -> bool {
        if (pos == r) return try_basis(idx);
        for (i64 i = start; i < k; ++i) {
            idx[pos] = i;
            if (rec(pos + 1, i + 1)) return true;
        }
        return false;
    };
    if (rec(0, 0)) return res;
    // augment with pairwise sums (bounded)
    i64 added = 0;
    const i64 base_count = k;
    for (i64 a = 0; a < base_count && added < 64; ++a)
        for (i64 b = a + 1; b < base_count && added < 64; ++b) {
            candidates.push_back(candidates[a] + candidates[b]);
            ++added;
        }
    const i64 k2 = static_cast<i64>(candidates.size());
    std::function<bool(i64, i64)> rec2 = [&](i64 pos, i64 start) -> bool {
        if (pos == r) return try_basis(idx);
        for (i64 i = start; i < k2; ++i) {
            idx[pos] = i;
            if (rec2(pos + 1, i + 1)) return true;
        }
        return false;
    };
    if (rec2(0, 0)) return res;
    res.reason = "NotFlatlyTrivial: no invertible combination in the search window";
    return res;
}

}  // namespace wittflow
