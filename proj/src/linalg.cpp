#include "wittflow/linalg.hpp"

namespace wittflow {

// ---------------------------------------------------------------------------
// F_p Gaussian elimination

namespace {

// Reduce A in place to reduced row echelon form; returns pivot column of each
// pivot row, in order.
std::vector<i64> fp_rref(FpMat& A) {
    std::vector<i64> pivots;
    i64 row = 0;
    for (i64 col = 0; col < A.cols && row < A.rows; ++col) {
        i64 pr = -1;
        for (i64 r = row; r < A.rows; ++r)
            if (A.at(r, col) != 0) { pr = r; break; }
        if (pr < 0) continue;
        if (pr != row)
            for (i64 c = 0; c < A.cols; ++c) std::swap(A.at(pr, c), A.at(row, c));
        i64 inv = inv_mod(A.at(row, col), A.p);
        for (i64 c = col; c < A.cols; ++c) A.at(row, c) = mod_pos(A.at(row, c) * inv, A.p);
        for (i64 r = 0; r < A.rows; ++r) {
            if (r == row) continue;
            i64 f = A.at(r, col);
            if (f == 0) continue;
            for (i64 c = col; c < A.cols; ++c)
                A.at(r, c) = mod_pos(A.at(r, c) - f * A.at(row, c), A.p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<std::vector<i64>> fp_kernel(FpMat A) {
    auto pivots = fp_rref(A);
    std::vector<bool> is_pivot(A.cols, false);
    for (i64 c : pivots) is_pivot[c] = true;
    std::vector<std::vector<i64>> kernel;
    for (i64 free_col = 0; free_col < A.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<i64> v(A.cols, 0);
        v[free_col] = 1;
        for (size_t pr = 0; pr < pivots.size(); ++pr)
            v[pivots[pr]] = mod_pos(-A.at(pr, free_col), A.p);
        kernel.push_back(std::move(v));
    }
    return kernel;
}

std::optional<std::vector<i64>> fp_solve(FpMat A, std::vector<i64> b) {
    FpMat aug(A.p, A.rows, A.cols + 1);
    for (i64 r = 0; r < A.rows; ++r) {
        for (i64 c = 0; c < A.cols; ++c) aug.at(r, c) = mod_pos(A.at(r, c), A.p);
        aug.at(r, A.cols) = mod_pos(b[r], A.p);
    }
    auto pivots = fp_rref(aug);
    std::vector<i64> x(A.cols, 0);
    for (size_t pr = 0; pr < pivots.size(); ++pr) {
        if (pivots[pr] == A.cols) return std::nullopt;  // pivot in rhs column
        x[pivots[pr]] = aug.at(pr, A.cols);
    }
    return x;
}

i64 fp_rank(FpMat A) { return static_cast<i64>(fp_rref(A).size()); }

// ---------------------------------------------------------------------------
// Smith-style diagonalization over W_n(F_q)

namespace {

struct SmithResult {
    // D = diag pivots (valuations), after A -> U A V; U applied to rhs lazily
    std::vector<std::vector<WittElem>> A;  // transformed matrix (diagonal-ish)
    std::vector<std::vector<WittElem>> V;  // cols x cols change of unknowns
    std::vector<std::vector<WittElem>> rhs;  // transformed right-hand sides
    std::vector<i64> pivot_vals;             // valuations of the first k diagonal pivots
};

SmithResult smith_diagonalize(std::vector<std::vector<WittElem>> A,
                              std::vector<std::vector<WittElem>> rhs,
                              const WittRingPtr& ring) {
    const i64 rows = static_cast<i64>(A.size());
    const i64 cols = rows ? static_cast<i64>(A[0].size()) : 0;
    const i64 n = ring->n();
    SmithResult res;
    res.V.assign(cols, std::vector<WittElem>(cols, ring->zero()));
    for (i64 i = 0; i < cols; ++i) res.V[i][i] = ring->one();

    i64 k = 0;
    while (k < rows && k < cols) {
        // global min-valuation pivot in the trailing block
        i64 best_r = -1, best_c = -1, best_v = n;
        for (i64 r = k; r < rows; ++r)
            for (i64 c = k; c < cols; ++c) {
                i64 v = A[r][c].val();
                if (v < best_v) { best_v = v; best_r = r; best_c = c; }
            }
        if (best_r < 0 || best_v >= n) break;
        std::swap(A[k], A[best_r]);
        for (auto& col : rhs) std::swap(col[k], col[best_r]);
        if (best_c != k) {
            for (i64 r = 0; r < rows; ++r) std::swap(A[r][k], A[r][best_c]);
            std::swap(res.V[k], res.V[best_c]);  // V stored row-major as V[c] = row c? see below
        }
        // Normalize: pivot = p^v * u -> multiply row by u^{-1}
        WittElem unit = A[k][k].div_p(best_v);
        WittElem uinv = unit.inverse();
        for (i64 c = k; c < cols; ++c) A[k][c] = A[k][c] * uinv;
        for (auto& col : rhs) col[k] = col[k] * uinv;
        // Clear column k
        for (i64 r = 0; r < rows; ++r) {
            if (r == k || A[r][k].is_zero()) continue;
            WittElem f = A[r][k].div_p(best_v);
            for (i64 c = k; c < cols; ++c) A[r][c] = A[r][c] - f * A[k][c];
            for (auto& col : rhs) col[r] = col[r] - f * col[k];
        }
        // Clear row k to the right via column ops mirrored on V
        for (i64 c = k + 1; c < cols; ++c) {
            if (A[k][c].is_zero()) continue;
            WittElem f = A[k][c].div_p(best_v);
            for (i64 r = 0; r < rows; ++r) A[r][c] = A[r][c] - f * A[r][k];
            for (i64 i = 0; i < cols; ++i) res.V[c][i] = res.V[c][i] - f * res.V[k][i];
        }
        res.pivot_vals.push_back(best_v);
        ++k;
    }
    res.A = std::move(A);
    res.rhs = std::move(rhs);
    return res;
}

}  // namespace

std::optional<WittLinearSystem::Solution> WittLinearSystem::solve(const std::vector<WittElem>& b) const {
    if (A.empty()) return Solution{{}, {}};
    auto ring = A[0][0].ring();
    const i64 rows = static_cast<i64>(A.size());
    const i64 cols = static_cast<i64>(A[0].size());
    const i64 n = ring->n();
    auto res = smith_diagonalize(A, {b}, ring);
    const auto& bb = res.rhs[0];
    const i64 rank = static_cast<i64>(res.pivot_vals.size());
    // consistency beyond the pivots
    for (i64 r = rank; r < rows; ++r)
        if (!bb[r].is_zero()) return std::nullopt;
    std::vector<WittElem> y(cols, ring->zero());
    for (i64 kk = 0; kk < rank; ++kk) {
        i64 v = res.pivot_vals[kk];
        if (bb[kk].val() < v) return std::nullopt;
        y[kk] = bb[kk].div_p(v);
    }
    // x = V^T y: V[c] holds the unknown-space image row for transformed
    // coordinate c, i.e. x = sum_c y_c * V[c].
    auto expand = [&](const std::vector<WittElem>& yy) {
        std::vector<WittElem> x(cols, ring->zero());
        for (i64 c = 0; c < cols; ++c) {
            if (yy[c].is_zero()) continue;
            for (i64 i = 0; i < cols; ++i) x[i] = x[i] + yy[c] * res.V[c][i];
        }
        return x;
    };
    Solution sol;
    sol.particular = expand(y);
    for (i64 kk = 0; kk < cols; ++kk) {
        i64 v = kk < rank ? res.pivot_vals[kk] : n;
        if (kk < rank && v == 0) continue;  // no kernel in a unit pivot direction
        std::vector<WittElem> yy(cols, ring->zero());
        yy[kk] = kk < rank ? ring->from_int(pow_i64(ring->p(), n - v)) : ring->one();
        sol.kernel.push_back(expand(yy));
    }
    return sol;
}

std::vector<std::vector<WittElem>> WittLinearSystem::kernel() const {
    if (A.empty()) return {};
    auto zero_b = std::vector<WittElem>(A.size(), A[0][0].ring()->zero());
    auto sol = solve(zero_b);
    if (!sol) throw InternalError("kernel: homogeneous system reported unsolvable");
    return sol->kernel;
}

// ---------------------------------------------------------------------------
// WittSpan (Howell-style echelon over Z/p^n)

WittSpan::WittSpan(WittRingPtr ring, i64 length)
    : ring_(std::move(ring)), len_(length), dim_(length * ring_->m()) {}

void WittSpan::add(const std::vector<WittElem>& v) {
    if (static_cast<i64>(v.size()) != len_) throw InvalidArgument("WittSpan: wrong length");
    std::vector<i64> flat(dim_);
    for (i64 i = 0; i < len_; ++i)
        for (i64 j = 0; j < ring_->m(); ++j) flat[i * ring_->m() + j] = v[i].coeffs()[j];
    reduce_and_insert(std::move(flat));
}

void WittSpan::reduce_and_insert(std::vector<i64> flat) {
    const i64 p = ring_->p(), n = ring_->n(), pn = ring_->pn();
    for (i64 pos = 0; pos < dim_; ++pos) {
        if (flat[pos] == 0) continue;
        i64 v = val_p(flat[pos], p, n);
        // find existing row with this pivot
        i64 found = -1;
        for (size_t r = 0; r < rows_.size(); ++r)
            if (pivot_[r] == pos) { found = static_cast<i64>(r); break; }
        if (found >= 0 && valuation_[found] <= v) {
            i64 f = mod_pos(flat[pos] / pow_i64(p, valuation_[found]), pn);
            const auto& row = rows_[found];
            for (i64 c = pos; c < dim_; ++c) flat[c] = mod_pos(flat[c] - f * row[c], pn);
            continue;
        }
        // insert here; displace any weaker existing row
        i64 unit = flat[pos] / pow_i64(p, v);
        i64 uinv = inv_mod(unit, pn);
        for (i64 c = pos; c < dim_; ++c) flat[c] = mod_pos(flat[c] * uinv, pn);
        std::vector<i64> displaced;
        if (found >= 0) {
            displaced = rows_[found];
            rows_[found] = flat;
            valuation_[found] = v;
        } else {
            rows_.push_back(flat);
            pivot_.push_back(pos);
            valuation_.push_back(v);
        }
        // Howell closure: p^{n-v} times this row lands strictly to the right
        if (v > 0) {
            std::vector<i64> tail(dim_, 0);
            i64 mult = pow_i64(p, n - v);
            for (i64 c = pos + 1; c < dim_; ++c) tail[c] = mod_pos(flat[c] * mult, pn);
            reduce_and_insert(std::move(tail));
        }
        if (!displaced.empty()) reduce_and_insert(std::move(displaced));
        return;
    }
}

bool WittSpan::contains(const std::vector<WittElem>& v) const {
    std::vector<i64> flat(dim_);
    for (i64 i = 0; i < len_; ++i)
        for (i64 j = 0; j < ring_->m(); ++j) flat[i * ring_->m() + j] = v[i].coeffs()[j];
    const i64 p = ring_->p(), n = ring_->n(), pn = ring_->pn();
    for (i64 pos = 0; pos < dim_; ++pos) {
        if (flat[pos] == 0) continue;
        i64 vv = val_p(flat[pos], p, n);
        i64 found = -1;
        for (size_t r = 0; r < rows_.size(); ++r)
            if (pivot_[r] == pos) { found = static_cast<i64>(r); break; }
        if (found < 0 || valuation_[found] > vv) return false;
        i64 f = mod_pos(flat[pos] / pow_i64(p, valuation_[found]), pn);
        for (i64 c = pos; c < dim_; ++c) flat[c] = mod_pos(flat[c] - f * rows_[found][c], pn);
    }
    return true;
}

i64 WittSpan::log_size() const {
    i64 total = 0;
    for (i64 v : valuation_) total += ring_->n() - v;
    return total;
}

bool WittSpan::same_span(const WittSpan& o) const {
    if (len_ != o.len_ || !ring_->same_ring(*o.ring_)) return false;
    if (log_size() != o.log_size()) return false;
    // containment one way plus equal cardinality
    const i64 m = ring_->m();
    for (const auto& row : rows_) {
        std::vector<WittElem> v;
        for (i64 i = 0; i < len_; ++i) {
            std::vector<i64> cs(row.begin() + i * m, row.begin() + (i + 1) * m);
            v.push_back(ring_->from_coeffs(std::move(cs)));
        }
        if (!o.contains(v)) return false;
    }
    return true;
}

}  // namespace wittflow
