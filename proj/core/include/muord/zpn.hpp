#pragma once

#include <cstdint>
#include <vector>

namespace muord::zpn {

// Dense matrices over Z/p^n with exact arithmetic.  Everything here reduces
// to Smith-style pivoting on the p-valuation: over Z/p^n any entry of minimal
// valuation divides the rest, so elimination never leaves the ring.
struct Ring {
    long long p = 2;
    int n = 1;
    long long mod = 2;  // p^n

    Ring() = default;
    Ring(long long p_, int n_);

    long long reduce(long long x) const;
    long long mul(long long a, long long b) const;
    // p-adic valuation in [0, n]; v(0) = n.
    int val(long long x) const;
    // Inverse of a unit (valuation 0).
    long long inv_unit(long long u) const;
};

struct Mat {
    int rows = 0, cols = 0;
    std::vector<long long> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    long long& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    long long at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static Mat identity(int r);
};

Mat mul(const Ring& R, const Mat& A, const Mat& B);
Mat scalar_mul(const Ring& R, long long c, const Mat& A);
Mat hcat(const Mat& A, const Mat& B);
bool equal(const Mat& A, const Mat& B);

// Diagonal exponents d_j (valuation of the j-th elementary divisor, n for a
// zero column) together with the right transform: A = L^{-1} . D . Rt^{-1},
// so ker A = Rt . ker D.
struct Smith {
    std::vector<int> diag_exp;  // size min(rows, cols), padded to cols with n
    Mat right;                  // cols x cols, invertible
};

Smith smith(const Ring& R, const Mat& A);

// Length (= log_p of the order) of the column span of A inside (Z/p^n)^rows.
int image_length(const Ring& R, const Mat& A);

// Generators of {x : A x = 0}, one per column.
Mat kernel(const Ring& R, const Mat& A);

// Column-span operations; submodules are given by generator matrices with a
// common row count.
Mat span_sum(const Mat& A, const Mat& B);
Mat span_intersect(const Ring& R, const Mat& A, const Mat& B);
bool span_contains(const Ring& R, const Mat& big, const Mat& small);
bool span_equal(const Ring& R, const Mat& A, const Mat& B);

}  // namespace muord::zpn
