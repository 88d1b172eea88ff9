// zmat.hpp — dense exact matrices over GMP integers and rationals.
// Conventions used throughout the library:
//   * vectors are rows; row-times-matrix composition, so U*A applies the
//     row operations recorded in U to A;
//   * Hermite and Smith forms are canonical, making every derived basis
//     deterministic for identical input.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace k3lat {

using Z = mpz_class;
using Q = mpq_class;

template <class T>
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> a;  // row-major

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool operator==(const Mat&) const = default;

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
    }
};

using ZMat = Mat<Z>;
using QMat = Mat<Q>;

using ZVec = std::vector<Z>;
using QVec = std::vector<Q>;

ZMat transpose(const ZMat& m);
QMat transpose(const QMat& m);
ZMat mul(const ZMat& x, const ZMat& y);
QMat mul(const QMat& x, const QMat& y);
QVec mul_vec(const QVec& v, const QMat& m);  // row vector times matrix

QMat to_q(const ZMat& m);
// Fails (nullopt) when some entry has a denominator.
std::optional<ZMat> to_z(const QMat& m);

// Exact determinant of a square matrix (fraction-free Bareiss).
Z det(const ZMat& m);
Q det(const QMat& m);

// Row-style Hermite normal form: U*A = H with U unimodular, the first
// `rank` rows of H nonzero, pivots positive, and entries above each pivot
// reduced into [0, pivot).
struct HnfResult {
    ZMat h;
    ZMat u;
    std::size_t rank = 0;
};
HnfResult hnf(const ZMat& a);

// Smith normal form: U*A*V = D diagonal with d1 | d2 | ... | dr, di > 0.
struct SnfResult {
    ZMat d;
    ZMat u;
    ZMat v;
    std::size_t rank = 0;
};
SnfResult snf(const ZMat& a);

// Basis (as rows) of { x : x*A = 0 } over the integers; the result is
// saturated (a basis of the full kernel sublattice of Z^rows).
ZMat left_kernel(const ZMat& a);

// Saturation of the row span: basis of (rowspan_Q(a) intersect Z^cols).
ZMat saturate_rows(const ZMat& a);

// Solve x*B = v exactly over the rationals; nullopt when inconsistent.
// When B has full row rank the solution is unique.
std::optional<QVec> solve_left(const QMat& b, const QVec& v);

// Sylvester signature of a symmetric rational matrix by exact congruence
// diagonalization: (#positive, #negative) diagonal entries.  Degenerate
// directions contribute to neither count.
std::pair<int, int> symmetric_signature(QMat g);

std::string to_string(const Q& q);  // canonical "p" or "p/q"
std::string to_string(const Z& z);
Q q_from_string(const std::string& s);

}  // namespace k3lat
