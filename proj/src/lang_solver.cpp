#include "wittflow/lang_solver.hpp"

#include <algorithm>
#include <map>

namespace wittflow {

// ---------------------------------------------------------------------------
// mod-p steps

KummerStepResult solve_kummer_step(const Mat<FqElem>& B1, const FqFieldPtr& ambient, i64 twist) {
    const i64 r = B1.rows();
    const i64 p = ambient->p(), m = ambient->m();
    if (!B1.det().is_unit()) throw InvalidArgument("kummer step: B1 must be invertible");
    const i64 D = r * m;
    FpMat T(p, D, D);
    for (i64 i = 0; i < r; ++i)
        for (i64 c = 0; c < m; ++c) {
            std::vector<i64> cs(m, 0);
            cs[c] = 1;
            FqElem b = ambient->from_coeffs(cs);
            FqElem fb = frobenius_pow(b, twist);
            i64 col = i * m + c;
            for (i64 k = 0; k < m; ++k)
                T.at(i * m + k, col) = mod_pos(T.at(i * m + k, col) + fb.coeffs()[k], p);
            for (i64 j = 0; j < r; ++j) {
                FqElem prod = B1.at(j, i) * b;
                for (i64 k = 0; k < m; ++k)
                    T.at(j * m + k, col) = mod_pos(T.at(j * m + k, col) - prod.coeffs()[k], p);
            }
        }
    KummerStepResult res;
    for (const auto& kvec : fp_kernel(T)) {
        std::vector<FqElem> v;
        for (i64 i = 0; i < r; ++i) {
            std::vector<i64> cs(kvec.begin() + i * m, kvec.begin() + (i + 1) * m);
            v.push_back(ambient->from_coeffs(cs));
        }
        res.basis.push_back(std::move(v));
    }
    return res;
}

ArtinSchreierStepResult solve_artin_schreier_step(const Mat<FqElem>& B1,
                                                  const std::vector<FqElem>& z,
                                                  const FqFieldPtr& ambient, i64 twist) {
    const i64 r = B1.rows();
    const i64 p = ambient->p(), m = ambient->m();
    const i64 D = r * m;
    FpMat T(p, D, D);
    for (i64 i = 0; i < r; ++i)
        for (i64 c = 0; c < m; ++c) {
            std::vector<i64> cs(m, 0);
            cs[c] = 1;
            FqElem b = ambient->from_coeffs(cs);
            FqElem fb = frobenius_pow(b, twist);
            i64 col = i * m + c;
            for (i64 k = 0; k < m; ++k)
                T.at(i * m + k, col) = mod_pos(T.at(i * m + k, col) + fb.coeffs()[k], p);
            for (i64 j = 0; j < r; ++j) {
                FqElem prod = B1.at(j, i) * b;
                for (i64 k = 0; k < m; ++k)
                    T.at(j * m + k, col) = mod_pos(T.at(j * m + k, col) - prod.coeffs()[k], p);
            }
        }
    std::vector<i64> rhs(D, 0);
    for (i64 i = 0; i < r; ++i)
        for (i64 k = 0; k < m; ++k) rhs[i * m + k] = z[i].coeffs()[k];
    ArtinSchreierStepResult res;
    auto sol = fp_solve(T, rhs);
    if (!sol) return res;
    res.solvable = true;
    for (i64 i = 0; i < r; ++i) {
        std::vector<i64> cs(sol->begin() + i * m, sol->begin() + (i + 1) * m);
        res.particular.push_back(ambient->from_coeffs(cs));
    }
    for (const auto& kvec : fp_kernel(T)) {
        std::vector<FqElem> v;
        for (i64 i = 0; i < r; ++i) {
            std::vector<i64> cs(kvec.begin() + i * m, kvec.begin() + (i + 1) * m);
            v.push_back(ambient->from_coeffs(cs));
        }
        res.kernel.push_back(std::move(v));
    }
    return res;
}

// ---------------------------------------------------------------------------
// point-case driver

namespace {

// smallest k >= 1 with sigma^{f(k-1)}(B) ... sigma^f(B) B = I
i64 twisted_order(const WittMat& B, i64 period, i64 cap) {
    auto ring = B.at(0, 0).ring();
    WittMat C = B;
    WittMat I = witt_identity(B.rows(), ring);
    for (i64 k = 1; k <= cap; ++k) {
        if (C == I) return k;
        WittMat Bk = B.map([&](const WittElem& x) { return sigma_pow(x, period * k); });
        C = Bk * C;
    }
    throw BudgetError("solve_frobenius_fixed: twisted order exceeds cap");
}

struct FlatZn {
    // dense integer matrix over Z/p^n
    i64 pn, rows, cols;
    std::vector<i64> a;
    FlatZn(i64 pn_, i64 r, i64 c) : pn(pn_), rows(r), cols(c), a(r * c, 0) {}
    i64& at(i64 r, i64 c) { return a[r * cols + c]; }
    i64 at(i64 r, i64 c) const { return a[r * cols + c]; }
    std::vector<i64> apply(const std::vector<i64>& x) const {
        std::vector<i64> y(rows, 0);
        for (i64 r = 0; r < rows; ++r) {
            i64 acc = 0;
            for (i64 c = 0; c < cols; ++c) acc = (acc + at(r, c) * x[c]) % pn;
            y[r] = mod_pos(acc, pn);
        }
        return y;
    }
};

}  // namespace

SolutionModule solve_frobenius_fixed(const WittMat& B, i64 period, const SolverPolicy& policy) {
    auto Rm = B.at(0, 0).ring();
    const i64 p = Rm->p(), n = Rm->n(), m = Rm->m();
    const i64 r = B.rows();
    if (!B.det().is_unit()) throw InvalidArgument("solve_frobenius_fixed: B must be invertible");

    i64 k = twisted_order(B, period, policy.twisted_order_cap);
    i64 M = lcm_i64(lcm_i64(period * k, m), period);
    if (M > policy.max_ambient_degree)
        throw BudgetError("ExtensionBudgetExceeded: ambient degree " + std::to_string(M) +
                          " exceeds cap " + std::to_string(policy.max_ambient_degree));

    auto ambient = WittRing::create(p, n, M);
    auto scalars = WittRing::create(p, n, period);
    auto emb_m = WittEmbedding::canonical(Rm, ambient);
    auto emb_f = WittEmbedding::canonical(scalars, ambient);
    WittMat Bhat = B.map([&](const WittElem& x) { return emb_m.apply(x); });

    const i64 pn = Rm->pn();
    const i64 D = r * M;

    // sigma^f images of the ambient power basis
    std::vector<WittElem> sf(M, ambient->zero());
    {
        WittElem cur = ambient->one();
        WittElem g = ambient->generator();
        for (i64 c = 0; c < M; ++c) {
            sf[c] = sigma_pow(cur, period);
            cur = M > 1 ? cur * g : cur;  // M = 1: basis is {1}
        }
    }

    // T: x -> sigma^f(x) - Bhat x on flattened coordinates (i, c)
    FlatZn T(pn, D, D);
    for (i64 i = 0; i < r; ++i)
        for (i64 c = 0; c < M; ++c) {
            i64 col = i * M + c;
            for (i64 kk = 0; kk < M; ++kk)
                T.at(i * M + kk, col) = mod_pos(T.at(i * M + kk, col) + sf[c].coeffs()[kk], pn);
            std::vector<i64> cs(M, 0);
            cs[c] = 1;
            WittElem b = ambient->from_coeffs(cs);
            for (i64 j = 0; j < r; ++j) {
                WittElem prod = Bhat.at(j, i) * b;
                for (i64 kk = 0; kk < M; ++kk)
                    T.at(j * M + kk, col) = mod_pos(T.at(j * M + kk, col) - prod.coeffs()[kk], pn);
            }
        }

    // mod-p kernel
    FpMat Tbar(p, D, D);
    for (i64 i = 0; i < D * D; ++i) Tbar.a[i] = mod_pos(T.a[i], p);
    auto K1 = fp_kernel(Tbar);
    if (static_cast<i64>(K1.size()) != period * r)
        throw InternalError("solve_frobenius_fixed: mod-p solution space has dimension " +
                            std::to_string(K1.size()) + ", expected " + std::to_string(period * r));

    // lift each basis vector through the levels, keeping per-level snapshots
    std::vector<std::vector<std::vector<i64>>> snapshots;  // [level-1][basis][coords]
    snapshots.push_back(K1);
    std::vector<std::vector<i64>> cur = K1;
    for (i64 lev = 1; lev < n; ++lev) {
        i64 pi = pow_i64(p, lev);
        std::vector<std::vector<i64>> next;
        for (auto x : cur) {
            if (policy.lift_choice == SolverPolicy::LiftChoice::kOffset) {
                for (size_t c = 0; c < x.size(); ++c)
                    x[c] = mod_pos(x[c] + pi * (static_cast<i64>(c) % p), pn);
            }
            auto residual = T.apply(x);
            std::vector<i64> z(D);
            for (i64 d = 0; d < D; ++d) {
                if (residual[d] % pi != 0)
                    throw InternalError("solve_frobenius_fixed: residual valuation too small");
                z[d] = mod_pos(-(residual[d] / pi), p);
            }
            auto y = fp_solve(Tbar, z);
            if (!y) throw InternalError("solve_frobenius_fixed: lift step unsolvable in ambient");
            for (i64 d = 0; d < D; ++d) x[d] = mod_pos(x[d] + pi * (*y)[d], pn);
            next.push_back(std::move(x));
        }
        snapshots.push_back(next);
        cur = std::move(next);
    }
    for (const auto& x : cur)
        for (i64 v : T.apply(x))
            if (v != 0) throw InternalError("solve_frobenius_fixed: final solution check failed");

    auto unflatten = [&](const std::vector<i64>& flat) {
        std::vector<WittElem> v;
        for (i64 i = 0; i < r; ++i) {
            std::vector<i64> cs(flat.begin() + i * M, flat.begin() + (i + 1) * M);
            v.push_back(ambient->from_coeffs(cs));
        }
        return v;
    };

    // module generators: p^{n - lev} * (level-lev lifts); full-level first
    std::vector<std::vector<WittElem>> gens;
    for (i64 lev = n; lev >= 1; --lev) {
        i64 scale = pow_i64(p, n - lev);
        for (const auto& x : snapshots[lev - 1]) {
            std::vector<i64> s(x);
            for (auto& c : s) c = mod_pos(c * scale, pn);
            gens.push_back(unflatten(s));
        }
    }

    auto span = std::make_shared<WittSpan>(ambient, r);
    for (const auto& gvec : gens) span->add(gvec);
    if (span->log_size() != n * period * r)
        throw InternalError("solve_frobenius_fixed: module cardinality is p^" +
                            std::to_string(span->log_size()) + ", expected p^" +
                            std::to_string(n * period * r));

    // scalar multiplication structure
    WittElem gf = emb_f.apply(scalars->generator());
    std::vector<WittElem> gf_pows(period, ambient->one());
    for (i64 b = 1; b < period; ++b) gf_pows[b] = gf_pows[b - 1] * gf;

    // greedy free-basis extraction over the scalar ring
    std::vector<std::vector<WittElem>> basis;
    WittSpan chosen(ambient, r);
    auto add_scalar_span = [&](const std::vector<WittElem>& v) {
        for (i64 b = 0; b < period; ++b) {
            std::vector<WittElem> w;
            for (const auto& x : v) w.push_back(x * gf_pows[b]);
            chosen.add(w);
        }
    };
    for (const auto& gvec : gens) {
        if (static_cast<i64>(basis.size()) == r) break;
        if (chosen.contains(gvec)) continue;
        basis.push_back(gvec);
        add_scalar_span(gvec);
    }
    if (static_cast<i64>(basis.size()) != r || chosen.log_size() != n * period * r ||
        !chosen.same_span(*span))
        throw InternalError("solve_frobenius_fixed: free basis extraction failed");

    // matrix of sigma^m on the basis, coefficients in the scalar ring;
    // sigma^m is scalar-linear exactly when f | m
    WittMat P(r, r, scalars->zero());
    if (m % period == 0) {
    auto zn = WittRing::create(p, n, 1);
    const i64 cols = r * period;
    std::vector<std::vector<WittElem>> Asys(D, std::vector<WittElem>(cols, zn->zero()));
    for (i64 i = 0; i < r; ++i)
        for (i64 b = 0; b < period; ++b) {
            i64 col = i * period + b;
            for (i64 row_i = 0; row_i < r; ++row_i) {
                WittElem e = basis[i][row_i] * gf_pows[b];
                for (i64 c = 0; c < M; ++c) Asys[row_i * M + c][col] = zn->from_int(e.coeffs()[c]);
            }
        }
    WittLinearSystem sys{Asys};
    for (i64 j = 0; j < r; ++j) {
        std::vector<WittElem> rhs(D, zn->zero());
        for (i64 row_i = 0; row_i < r; ++row_i) {
            WittElem img = sigma_pow(basis[j][row_i], m);
            for (i64 c = 0; c < M; ++c) rhs[row_i * M + c] = zn->from_int(img.coeffs()[c]);
        }
        auto sol = sys.solve(rhs);
        if (!sol) throw InternalError("solve_frobenius_fixed: galois action not in module");
        for (i64 i = 0; i < r; ++i) {
            std::vector<i64> cs(period, 0);
            for (i64 b = 0; b < period; ++b) cs[b] = sol->particular[i * period + b].coeffs()[0];
            P.at(i, j) = scalars->from_coeffs(cs);
        }
    }
    if (!P.det().is_unit()) throw InternalError("solve_frobenius_fixed: galois matrix not invertible");
    }  // f | m

    SolutionModule out;
    out.ambient = ambient;
    out.scalars = scalars;
    out.rank = r;
    out.period = period;
    out.ambient_degree = M;
    out.basis = std::move(basis);
    out.frobq = std::move(P);
    out.log_cardinality = span->log_size();
    out.span = span;
    return out;
}

// ---------------------------------------------------------------------------
// curve case

EtaleCoverSpec extend_spec_constants(const EtaleCoverSpec& spec, const LaurentAlgebraPtr& big_base1) {
    auto small_field = spec.base()->coeffs()->base();
    auto big_field = big_base1->coeffs()->base();
    auto femb = FieldEmbedding::canonical(small_field, big_field);
    EtaleCoverSpec out;
    // rebuild layer by layer with embedded data; the Kummer root embeds so
    // group labels stay aligned
    bool first = true;
    for (const auto& l : spec.layers()) {
        if (l.kind == CoverLayer::Kind::kKummer) {
            out = EtaleCoverSpec::kummer(big_base1, l.degree);
            // overwrite the canonical choice with the embedded root
            out.zeta_ = femb.apply(spec.kummer_root());
            first = false;
        } else {
            LaurentElem g2 = map_coeffs(
                l.rhs,
                [&](const WittElem& c) {
                    return big_base1->coeffs()->lift_min(femb.apply(c.ring()->reduce_to_base(c)));
                },
                big_base1);
            if (first) {
                out = EtaleCoverSpec::artin_schreier(big_base1, g2);
                first = false;
            } else {
                out = out.then_artin_schreier(g2);
            }
        }
    }
    return out;
}

CurveSolutionModule solve_frobenius_fixed_curve(const EtaleCoverSpec& spec,
                                                const FrobeniusLift& base_lift,
                                                const LaurentMat& B, i64 period,
                                                const CurveSolverPolicy& policy) {
    auto alg = base_lift.algebra();
    auto Rm = alg->coeffs();
    const i64 p = Rm->p(), n = Rm->n(), m = Rm->m();
    const i64 r = B.rows();
    if (m % period != 0)
        throw InvalidArgument("curve solver: period must divide the constant field degree");
    const i64 pn = Rm->pn();

    i64 M = lcm_i64(period, m);
    i64 window = policy.window;
    std::string last_failure;
    while (true) {
        if (M > policy.max_ambient_degree) break;
        auto big_ring = WittRing::create(p, n, M);
        auto big_alg = LaurentAlgebra::create(big_ring);
        auto big_ring1 = WittRing::create(p, 1, M);
        auto big_alg1 = LaurentAlgebra::create(big_ring1);
        auto emb = WittEmbedding::canonical(Rm, big_ring);
        auto lift_coeff = [&](const LaurentElem& x) {
            return map_coeffs(x, [&](const WittElem& c) { return emb.apply(c); }, big_alg);
        };
        FrobeniusLift bigF(big_alg, lift_coeff(base_lift.image_of_t()));
        auto big_spec = extend_spec_constants(spec, big_alg1);
        auto cover = LiftedCover::lift(big_spec, n, bigF);
        LaurentMat Bhat = B.map(lift_coeff);

        const i64 deg = cover->degree();
        const i64 span_len = 2 * window + 1;
        const i64 D = r * deg * span_len * M;

        auto flatten = [&](const std::vector<CoverElem>& v, std::vector<i64>& out,
                           i64 out_window) -> bool {
            // returns false when support escapes the window
            (void)out_window;
            std::fill(out.begin(), out.end(), 0);
            for (i64 i = 0; i < r; ++i)
                for (i64 d = 0; d < deg; ++d)
                    for (const auto& [e, c] : v[i].coords()[d].terms()) {
                        if (e < -window || e > window) return false;
                        for (i64 cc = 0; cc < M; ++cc)
                            out[((i * deg + d) * span_len + (e + window)) * M + cc] = c.coeffs()[cc];
                    }
            return true;
        };

        auto basis_elem = [&](i64 i, i64 d, i64 e, i64 cc) {
            std::vector<CoverElem> v(r, cover->zero());
            std::vector<i64> cs(M, 0);
            cs[cc] = 1;
            std::vector<LaurentElem> coords(deg, big_alg->zero());
            coords[d] = big_alg->term(big_ring->from_coeffs(cs), e);
            v[i] = CoverElem(cover, std::move(coords));
            return v;
        };

        auto apply_T = [&](const std::vector<CoverElem>& v) {
            // sigma^f(x) - B x with sigma = the cover Frobenius
            std::vector<CoverElem> out(r, cover->zero());
            for (i64 i = 0; i < r; ++i) out[i] = cover->frobenius_pow(v[i], period);
            for (i64 i = 0; i < r; ++i)
                for (i64 j = 0; j < r; ++j)
                    out[i] = out[i] - v[j].scaled(Bhat.at(i, j));
            return out;
        };

        // output support: collect exponents per (row, monomial) dynamically
        // by applying T to all basis vectors
        std::vector<std::vector<CoverElem>> col_images;
        col_images.reserve(D);
        i64 out_lo = -window, out_hi = window;
        for (i64 i = 0; i < r; ++i)
            for (i64 d = 0; d < deg; ++d)
                for (i64 e = -window; e <= window; ++e)
                    for (i64 cc = 0; cc < M; ++cc) {
                        auto img = apply_T(basis_elem(i, d, e, cc));
                        for (i64 ii = 0; ii < r; ++ii)
                            for (i64 dd = 0; dd < deg; ++dd)
                                if (!img[ii].coords()[dd].is_zero()) {
                                    out_lo = std::min(out_lo, img[ii].coords()[dd].min_exp());
                                    out_hi = std::max(out_hi, img[ii].coords()[dd].max_exp());
                                }
                        col_images.push_back(std::move(img));
                    }
        const i64 out_span = out_hi - out_lo + 1;
        const i64 Dout = r * deg * out_span * M;
        FlatZn T(pn, Dout, D);
        for (i64 col = 0; col < D; ++col) {
            const auto& img = col_images[col];
            for (i64 i = 0; i < r; ++i)
                for (i64 d = 0; d < deg; ++d)
                    for (const auto& [e, c] : img[i].coords()[d].terms())
                        for (i64 cc = 0; cc < M; ++cc)
                            T.at(((i * deg + d) * out_span + (e - out_lo)) * M + cc, col) =
                                c.coeffs()[cc];
        }
        FpMat Tbar(p, Dout, D);
        for (i64 i = 0; i < Dout * D; ++i) Tbar.a[i] = mod_pos(T.a[i], p);
        auto K1 = fp_kernel(Tbar);
        if (static_cast<i64>(K1.size()) < period * r) {
            last_failure = "mod-p solution space too small";
            if (window < policy.max_window) {
                window += std::max<i64>(2, window / 2);
                continue;
            }
            M += lcm_i64(period, m);
            window = policy.window;
            continue;
        }
        if (static_cast<i64>(K1.size()) > period * r)
            throw InternalError("curve solver: mod-p solution space too large");

        std::vector<std::vector<std::vector<i64>>> snapshots;
        snapshots.push_back(K1);
        std::vector<std::vector<i64>> curvecs = K1;
        bool lift_failed = false;
        for (i64 lev = 1; lev < n && !lift_failed; ++lev) {
            i64 pi = pow_i64(p, lev);
            std::vector<std::vector<i64>> next;
            for (auto x : curvecs) {
                if (policy.lift_choice == SolverPolicy::LiftChoice::kOffset)
                    for (size_t c = 0; c < x.size(); ++c)
                        x[c] = mod_pos(x[c] + pi * (static_cast<i64>(c) % p), pn);
                auto residual = T.apply(x);
                std::vector<i64> z(Dout);
                for (i64 d = 0; d < Dout; ++d) {
                    if (residual[d] % pi != 0)
                        throw InternalError("curve solver: residual valuation too small");
                    z[d] = mod_pos(-(residual[d] / pi), p);
                }
                auto y = fp_solve(Tbar, z);
                if (!y) { lift_failed = true; break; }
                for (i64 d = 0; d < D; ++d) x[d] = mod_pos(x[d] + pi * (*y)[d], pn);
                next.push_back(std::move(x));
            }
            if (!lift_failed) {
                snapshots.push_back(next);
                curvecs = std::move(next);
            }
        }
        if (lift_failed) {
            last_failure = "NoSolutionInAmbient during lifting";
            if (window < policy.max_window) {
                window += std::max<i64>(2, window / 2);
                continue;
            }
            M += lcm_i64(period, m);
            window = policy.window;
            continue;
        }

        auto unflatten = [&](const std::vector<i64>& flat) {
            std::vector<CoverElem> v;
            for (i64 i = 0; i < r; ++i) {
                std::vector<LaurentElem> coords(deg, big_alg->zero());
                for (i64 d = 0; d < deg; ++d) {
                    std::vector<std::pair<i64, WittElem>> terms;
                    for (i64 e = -window; e <= window; ++e) {
                        std::vector<i64> cs(M);
                        for (i64 cc = 0; cc < M; ++cc)
                            cs[cc] = flat[((i * deg + d) * span_len + (e + window)) * M + cc];
                        WittElem w = big_ring->from_coeffs(cs);
                        if (!w.is_zero()) terms.emplace_back(e, w);
                    }
                    coords[d] = big_alg->from_terms(std::move(terms));
                }
                v.push_back(CoverElem(cover, std::move(coords)));
            }
            return v;
        };

        // module generators and span over Z/p^n
        auto zn = WittRing::create(p, n, 1);
        auto flatten_zn = [&](const std::vector<CoverElem>& v) {
            std::vector<i64> flat(D, 0);
            bool ok = flatten(v, flat, window);
            if (!ok) throw InternalError("curve solver: generator escaped the window");
            std::vector<WittElem> out;
            out.reserve(D);
            for (i64 d = 0; d < D; ++d) out.push_back(zn->from_int(flat[d]));
            return out;
        };
        std::vector<std::vector<CoverElem>> gens;
        for (i64 lev = n; lev >= 1; --lev) {
            i64 scale = pow_i64(p, n - lev);
            for (const auto& x : snapshots[lev - 1]) {
                std::vector<i64> s(x);
                for (auto& c : s) c = mod_pos(c * scale, pn);
                gens.push_back(unflatten(s));
            }
        }
        WittSpan span(zn, D);
        for (const auto& gvec : gens) span.add(flatten_zn(gvec));
        if (span.log_size() != n * period * r) {
            last_failure = "module cardinality short of p^{nfr}";
            if (window < policy.max_window) {
                window += std::max<i64>(2, window / 2);
                continue;
            }
            M += lcm_i64(period, m);
            window = policy.window;
            continue;
        }

        // scalar ring structure and free basis
        auto scalars = WittRing::create(p, n, period);
        auto emb_f = WittEmbedding::canonical(scalars, big_ring);
        std::vector<LaurentElem> gf_pows;
        {
            WittElem gf = emb_f.apply(scalars->generator());
            WittElem cur2 = big_ring->one();
            for (i64 b = 0; b < period; ++b) {
                gf_pows.push_back(big_alg->constant(cur2));
                cur2 = cur2 * gf;
            }
        }
        std::vector<std::vector<CoverElem>> basis;
        WittSpan chosen(zn, D);
        for (const auto& gvec : gens) {
            if (static_cast<i64>(basis.size()) == r) break;
            if (chosen.contains(flatten_zn(gvec))) continue;
            basis.push_back(gvec);
            for (i64 b = 0; b < period; ++b) {
                std::vector<CoverElem> w;
                for (const auto& x : gvec) w.push_back(x.scaled(gf_pows[b]));
                chosen.add(flatten_zn(w));
            }
        }
        if (static_cast<i64>(basis.size()) != r || chosen.log_size() != n * period * r)
            throw InternalError("curve solver: free basis extraction failed");

        // express a module automorphism image in the basis over the scalars
        const i64 cols = r * period;
        std::vector<std::vector<WittElem>> Asys(D, std::vector<WittElem>(cols, zn->zero()));
        for (i64 i = 0; i < r; ++i)
            for (i64 b = 0; b < period; ++b) {
                std::vector<CoverElem> w;
                for (const auto& x : basis[i]) w.push_back(x.scaled(gf_pows[b]));
                auto flat = flatten_zn(w);
                for (i64 d = 0; d < D; ++d) Asys[d][i * period + b] = flat[d];
            }
        WittLinearSystem sys{Asys};
        auto express = [&](const std::vector<std::vector<CoverElem>>& images) {
            WittMat P(r, r, scalars->zero());
            for (i64 j = 0; j < r; ++j) {
                auto rhs = flatten_zn(images[j]);
                auto sol = sys.solve(rhs);
                if (!sol) throw InternalError("curve solver: action image not in module");
                for (i64 i = 0; i < r; ++i) {
                    std::vector<i64> cs(period, 0);
                    for (i64 b = 0; b < period; ++b)
                        cs[b] = sol->particular[i * period + b].coeffs()[0];
                    P.at(i, j) = scalars->from_coeffs(cs);
                }
            }
            return P;
        };

        CurveSolutionModule out;
        out.cover = cover;
        out.scalars = scalars;
        out.rank = r;
        out.period = period;
        out.ambient_degree = M;
        out.basis = basis;
        for (i64 l = 0; l < cover->layer_count(); ++l) {
            CoverGroupElem g = cover->group_identity();
            g.idx[l] = 1;
            std::vector<std::vector<CoverElem>> images;
            for (const auto& bv : basis) {
                std::vector<CoverElem> img;
                for (const auto& x : bv) img.push_back(cover->galois_act(g, x));
                images.push_back(std::move(img));
            }
            out.galois_generators.push_back(express(images));
        }
        {
            std::vector<std::vector<CoverElem>> images;
            for (const auto& bv : basis) {
                std::vector<CoverElem> img;
                for (const auto& x : bv) img.push_back(cover->constant_sigma(x, m));
                images.push_back(std::move(img));
            }
            out.arith_frobenius = express(images);
        }
        out.log_cardinality = span.log_size();
        out.complete = true;
        return out;
    }
    CurveSolutionModule out;
    out.complete = false;
    throw BudgetError("curve solver: " +
                      (last_failure.empty() ? std::string("no trivializing ambient found")
                                            : last_failure) +
                      " within budget");
}

}  // namespace wittflow
