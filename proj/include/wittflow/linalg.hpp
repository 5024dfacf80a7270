#pragma once

// Small dense matrices over the exact coefficient rings, plus the two linear
// algebra engines everything else reduces to: Gaussian elimination over F_p
// and Smith-style diagonalization over the local rings W_n(F_q).

#include <functional>
#include <optional>
#include <vector>

#include "wittflow/witt_rings.hpp"

namespace wittflow {

// ---------------------------------------------------------------------------
// Generic small dense matrix. T must provide +, -, unary -, *, ==, is_zero(),
// zero_like(), one_like().
template <class T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(i64 rows, i64 cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(i64 nn, const T& exemplar) {
        Mat r(nn, nn, exemplar.zero_like());
        for (i64 i = 0; i < nn; ++i) r.at(i, i) = exemplar.one_like();
        return r;
    }

    i64 rows() const { return rows_; }
    i64 cols() const { return cols_; }
    T& at(i64 r, i64 c) { return data_[r * cols_ + c]; }
    const T& at(i64 r, i64 c) const { return data_[r * cols_ + c]; }

    Mat operator+(const Mat& o) const {
        Mat r = *this;
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r = *this;
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }
    Mat operator*(const Mat& o) const {
        Mat r(rows_, o.cols_, data_.empty() ? T() : data_[0].zero_like());
        for (i64 i = 0; i < rows_; ++i)
            for (i64 k = 0; k < cols_; ++k) {
                const T& a = at(i, k);
                if (a.is_zero()) continue;
                for (i64 j = 0; j < o.cols_; ++j) r.at(i, j) = r.at(i, j) + a * o.at(k, j);
            }
        return r;
    }
    bool operator==(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (size_t i = 0; i < data_.size(); ++i)
            if (!(data_[i] == o.data_[i])) return false;
        return true;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (i64 i = 0; i < rows_; ++i)
            for (i64 j = 0; j < cols_; ++j) {
                if (i == j && !(at(i, j) == at(i, j).one_like())) return false;
                if (i != j && !at(i, j).is_zero()) return false;
            }
        return true;
    }

    Mat map(const std::function<T(const T&)>& f) const {
        Mat r = *this;
        for (auto& x : r.data_) x = f(x);
        return r;
    }

    Mat scaled(const T& c) const {
        Mat r = *this;
        for (auto& x : r.data_) x = x * c;
        return r;
    }

    // Determinant by cofactor expansion; ranks here never exceed 4.
    T det() const {
        if (rows_ != cols_ || rows_ == 0) throw InvalidArgument("det: not square");
        if (rows_ == 1) return at(0, 0);
        if (rows_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        T acc = data_[0].zero_like();
        for (i64 j = 0; j < cols_; ++j) {
            Mat minor(rows_ - 1, cols_ - 1, data_[0].zero_like());
            for (i64 r = 1; r < rows_; ++r) {
                i64 cc = 0;
                for (i64 c = 0; c < cols_; ++c) {
                    if (c == j) continue;
                    minor.at(r - 1, cc++) = at(r, c);
                }
            }
            T term = at(0, j) * minor.det();
            acc = (j % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }

    // Adjugate inverse; requires det to be invertible under `invert`.
    Mat inverse(const std::function<T(const T&)>& invert) const {
        T d = det();
        T dinv = invert(d);
        if (rows_ == 1) {
            Mat r(1, 1, dinv);
            return r;
        }
        Mat adj(rows_, cols_, data_[0].zero_like());
        for (i64 i = 0; i < rows_; ++i)
            for (i64 j = 0; j < cols_; ++j) {
                Mat minor(rows_ - 1, cols_ - 1, data_[0].zero_like());
                i64 rr = 0;
                for (i64 r = 0; r < rows_; ++r) {
                    if (r == i) continue;
                    i64 cc = 0;
                    for (i64 c = 0; c < cols_; ++c) {
                        if (c == j) continue;
                        minor.at(rr, cc++) = at(r, c);
                    }
                    ++rr;
                }
                T cof = minor.det();
                if ((i + j) % 2 == 1) cof = -cof;
                adj.at(j, i) = cof * dinv;  // transpose of cofactors
            }
        return adj;
    }

private:
    i64 rows_, cols_;
    std::vector<T> data_;
};

using WittMat = Mat<WittElem>;

inline WittMat witt_identity(i64 r, const WittRingPtr& ring) {
    return WittMat::identity(r, ring->one());
}

inline WittMat witt_mat_inverse(const WittMat& a) {
    return a.inverse([](const WittElem& x) { return x.inverse(); });
}

inline bool witt_mat_invertible(const WittMat& a) { return a.det().is_unit(); }

inline WittMat witt_mat_sigma_pow(const WittMat& a, i64 k) {
    return a.map([k](const WittElem& x) { return sigma_pow(x, k); });
}

// ---------------------------------------------------------------------------
// Dense F_p linear algebra on i64 entries.
struct FpMat {
    i64 p = 0;
    i64 rows = 0, cols = 0;
    std::vector<i64> a;  // row-major

    FpMat() = default;
    FpMat(i64 p_, i64 r, i64 c) : p(p_), rows(r), cols(c), a(r * c, 0) {}
    i64& at(i64 r, i64 c) { return a[r * cols + c]; }
    i64 at(i64 r, i64 c) const { return a[r * cols + c]; }
};

// Kernel basis of A (columns are unknowns), as vectors of length cols.
std::vector<std::vector<i64>> fp_kernel(FpMat A);

// One solution of A x = b, or nullopt.
std::optional<std::vector<i64>> fp_solve(FpMat A, std::vector<i64> b);

i64 fp_rank(FpMat A);

// ---------------------------------------------------------------------------
// Linear algebra over a local ring W_n(F_q): Smith-style diagonalization
// A = U D V with U, V invertible and D diagonal with p-power pivots.
// Solves A x = b and computes kernels exactly.
struct WittLinearSystem {
    // rows x cols coefficient matrix, entries in one ring
    std::vector<std::vector<WittElem>> A;

    // Returns a particular solution of A x = b plus a generating set of the
    // kernel (as a Z/p^n-module), or nullopt if unsolvable.
    struct Solution {
        std::vector<WittElem> particular;
        std::vector<std::vector<WittElem>> kernel;  // generators
    };
    std::optional<Solution> solve(const std::vector<WittElem>& b) const;
    std::vector<std::vector<WittElem>> kernel() const;
};

// Howell-style canonical generating data for a Z/p^n-submodule of R^k
// spanned by the given generators, where R = W_n(F_q) is itself viewed as a
// free Z/p^n-module of rank m. Used for module cardinality, membership and
// span-equality checks.
class WittSpan {
public:
    WittSpan(WittRingPtr ring, i64 length);  // module inside R^length

    void add(const std::vector<WittElem>& v);
    bool contains(const std::vector<WittElem>& v) const;
    // log_p of the module cardinality
    i64 log_size() const;
    bool same_span(const WittSpan& o) const;
    const WittRingPtr& ring() const { return ring_; }
    i64 length() const { return len_; }

private:
    // echelon rows over Z/p^n in the flattened coordinate space of dimension
    // len * m; row i has pivot position pivot_[i] with entry p^{val_[i]} * unit
    WittRingPtr ring_;
    i64 len_;
    i64 dim_;                               // len * m
    std::vector<std::vector<i64>> rows_;    // reduced generators, flattened
    std::vector<i64> pivot_, valuation_;
    void reduce_and_insert(std::vector<i64> flat);
};

}  // namespace wittflow
