#include "muord/zpn.hpp"

#include <cassert>
#include <stdexcept>

namespace muord::zpn {

Ring::Ring(long long p_, int n_) : p(p_), n(n_) {
    if (p < 2 || n < 1) throw std::invalid_argument("Ring requires p >= 2, n >= 1");
    mod = 1;
    for (int i = 0; i < n; ++i) mod *= p;
}

long long Ring::reduce(long long x) const {
    x %= mod;
    if (x < 0) x += mod;
    return x;
}

long long Ring::mul(long long a, long long b) const {
    // p^n stays below 2^31 for every use here, so the product fits in 64 bits.
    return reduce(a * b);
}

int Ring::val(long long x) const {
    x = reduce(x);
    if (x == 0) return n;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

long long Ring::inv_unit(long long u) const {
    u = reduce(u);
    assert(u % p != 0);
    // Extended Euclid on (u, mod).
    long long r0 = mod, r1 = u, t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long t2 = t0 - q * t1;
        r0 = r1; r1 = r2; t0 = t1; t1 = t2;
    }
    assert(r0 == 1);
    return reduce(t0);
}

Mat Mat::identity(int r) {
    Mat m(r, r);
    for (int i = 0; i < r; ++i) m.at(i, i) = 1;
    return m;
}

Mat mul(const Ring& R, const Mat& A, const Mat& B) {
    assert(A.cols == B.rows);
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            long long aik = A.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < B.cols; ++j)
                C.at(i, j) = R.reduce(C.at(i, j) + aik * B.at(k, j));
        }
    return C;
}

Mat scalar_mul(const Ring& R, long long c, const Mat& A) {
    Mat C = A;
    for (auto& x : C.a) x = R.mul(c, x);
    return C;
}

Mat hcat(const Mat& A, const Mat& B) {
    assert(A.rows == B.rows || A.cols == 0 || B.cols == 0);
    int rows = A.cols ? A.rows : B.rows;
    Mat C(rows, A.cols + B.cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
    }
    return C;
}

bool equal(const Mat& A, const Mat& B) {
    return A.rows == B.rows && A.cols == B.cols && A.a == B.a;
}

Smith smith(const Ring& R, const Mat& A) {
    Mat M = A;
    for (auto& x : M.a) x = R.reduce(x);
    Mat right = Mat::identity(M.cols);
    int steps = std::min(M.rows, M.cols);
    Smith out;
    out.diag_exp.assign(M.cols, R.n);

    for (int k = 0; k < steps; ++k) {
        // Pivot of minimal valuation in the trailing block.
        int pr = -1, pc = -1, pv = R.n;
        for (int i = k; i < M.rows; ++i)
            for (int j = k; j < M.cols; ++j) {
                int v = R.val(M.at(i, j));
                if (v < pv) { pv = v; pr = i; pc = j; }
            }
        if (pv >= R.n) break;  // trailing block is zero
        // Move pivot to (k, k).
        if (pr != k)
            for (int j = 0; j < M.cols; ++j) std::swap(M.at(k, j), M.at(pr, j));
        if (pc != k) {
            for (int i = 0; i < M.rows; ++i) std::swap(M.at(i, k), M.at(i, pc));
            for (int i = 0; i < right.rows; ++i) std::swap(right.at(i, k), right.at(i, pc));
        }
        // Normalize pivot to p^pv.
        long long unit = M.at(k, k);
        long long ppow = 1;
        for (int i = 0; i < pv; ++i) ppow *= R.p;
        long long u = unit / ppow;  // exact: val(unit) == pv
        long long uinv = R.inv_unit(u);
        for (int j = k; j < M.cols; ++j) M.at(k, j) = R.mul(uinv, M.at(k, j));
        // Clear column k below the pivot (row ops; left transform untracked).
        for (int i = k + 1; i < M.rows; ++i) {
            long long x = M.at(i, k);
            if (x == 0) continue;
            long long q = R.reduce(x / ppow);  // exact: val(x) >= pv
            for (int j = k; j < M.cols; ++j)
                M.at(i, j) = R.reduce(M.at(i, j) - q * M.at(k, j));
        }
        // Clear row k to the right of the pivot (col ops, mirrored into right).
        for (int j = k + 1; j < M.cols; ++j) {
            long long x = M.at(k, j);
            if (x == 0) continue;
            long long q = R.reduce(x / ppow);
            for (int i = 0; i < M.rows; ++i)
                M.at(i, j) = R.reduce(M.at(i, j) - q * M.at(i, k));
            for (int i = 0; i < right.rows; ++i)
                right.at(i, j) = R.reduce(right.at(i, j) - q * right.at(i, k));
        }
        out.diag_exp[k] = pv;
    }
    out.right = std::move(right);
    return out;
}

int image_length(const Ring& R, const Mat& A) {
    if (A.cols == 0 || A.rows == 0) return 0;
    auto s = smith(R, A);
    int len = 0;
    for (int d : s.diag_exp) len += R.n - d;
    return len;
}

Mat kernel(const Ring& R, const Mat& A) {
    if (A.cols == 0) return Mat(0, 0);
    auto s = smith(R, A);
    std::vector<int> keep;
    for (int j = 0; j < A.cols; ++j)
        if (s.diag_exp[j] > 0) keep.push_back(j);
    Mat K(A.cols, static_cast<int>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        int j = keep[c];
        long long ppow = 1;
        for (int i = 0; i < R.n - s.diag_exp[j]; ++i) ppow *= R.p;
        for (int i = 0; i < A.cols; ++i) K.at(i, static_cast<int>(c)) = R.mul(ppow, s.right.at(i, j));
    }
    return K;
}

Mat span_sum(const Mat& A, const Mat& B) { return hcat(A, B); }

Mat span_intersect(const Ring& R, const Mat& A, const Mat& B) {
    if (A.cols == 0 || B.cols == 0) return Mat(A.rows ? A.rows : B.rows, 0);
    Mat AB(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) AB.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) AB.at(i, A.cols + j) = R.reduce(-B.at(i, j));
    }
    Mat K = kernel(R, AB);
    // First A.cols rows of each kernel vector give the A-coefficients.
    Mat coeff(A.cols, K.cols);
    for (int i = 0; i < A.cols; ++i)
        for (int j = 0; j < K.cols; ++j) coeff.at(i, j) = K.at(i, j);
    return mul(R, A, coeff);
}

bool span_contains(const Ring& R, const Mat& big, const Mat& small) {
    if (small.cols == 0) return true;
    return image_length(R, big) == image_length(R, hcat(big, small));
}

bool span_equal(const Ring& R, const Mat& A, const Mat& B) {
    return span_contains(R, A, B) && span_contains(R, B, A);
}

}  // namespace muord::zpn
