// zmat.cpp — exact matrix kernels: Bareiss determinant, Hermite and Smith
// normal forms with transform tracking, integer kernels, rational solve,
// and Sylvester signature.
#include "k3lat/zmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace k3lat {

ZMat transpose(const ZMat& m) {
    ZMat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

QMat transpose(const QMat& m) {
    QMat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

ZMat mul(const ZMat& x, const ZMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
    ZMat r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

QMat mul(const QMat& x, const QMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
    QMat r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

QVec mul_vec(const QVec& v, const QMat& m) {
    if (v.size() != m.rows) throw std::invalid_argument("mul_vec: shape mismatch");
    QVec r(m.cols, Q(0));
    for (std::size_t k = 0; k < m.rows; ++k) {
        if (v[k] == 0) continue;
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += v[k] * m(k, j);
    }
    return r;
}

QMat to_q(const ZMat& m) {
    QMat r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Q(m.a[i]);
    return r;
}

std::optional<ZMat> to_z(const QMat& m) {
    ZMat r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) {
        if (m.a[i].get_den() != 1) return std::nullopt;
        r.a[i] = m.a[i].get_num();
    }
    return r;
}

Z det(const ZMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: not square");
    const std::size_t n = m.rows;
    if (n == 0) return 1;
    ZMat w = m;
    int sign = 1;
    Z prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && w(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(w(k, j), w(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Z num = w(i, j) * w(k, k) - w(i, k) * w(k, j);
                // Bareiss guarantees exact divisibility by the previous pivot.
                w(i, j) = num / prev;
            }
        prev = w(k, k);
    }
    return sign > 0 ? w(n - 1, n - 1) : Z(-w(n - 1, n - 1));
}

Q det(const QMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("det: not square");
    const std::size_t n = m.rows;
    if (n == 0) return Q(1);
    // Clear denominators row by row; det scales by the product.
    ZMat w(n, n);
    Q scale(1);
    for (std::size_t i = 0; i < n; ++i) {
        Z lcm = 1;
        for (std::size_t j = 0; j < n; ++j) {
            Z den = m(i, j).get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
        scale /= Q(lcm);
        for (std::size_t j = 0; j < n; ++j) {
            Q v = m(i, j) * Q(lcm);
            w(i, j) = v.get_num();
        }
    }
    return Q(det(w)) * scale;
}

namespace {

int cmpabs_z(const Z& x, const Z& y) {
    return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t());
}

void swap_rows(ZMat& m, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(i, c), m(j, c));
}

void negate_row(ZMat& m, std::size_t i) {
    for (std::size_t c = 0; c < m.cols; ++c) m(i, c) = -m(i, c);
}

// row i -= q * row k
void submul_row(ZMat& m, std::size_t i, std::size_t k, const Z& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < m.cols; ++c) m(i, c) -= q * m(k, c);
}

}  // namespace

HnfResult hnf(const ZMat& a) {
    HnfResult res;
    res.h = a;
    res.u = ZMat::identity(a.rows);
    ZMat& h = res.h;
    ZMat& u = res.u;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        // Gather the column below r to a single nonzero pivot by repeated
        // division; choosing the minimal |entry| keeps intermediate sizes
        // small and the end state is path independent.
        while (true) {
            std::size_t best = h.rows;
            for (std::size_t i = r; i < h.rows; ++i) {
                if (h(i, c) == 0) continue;
                if (best == h.rows || cmpabs_z(h(i, c), h(best, c)) < 0) best = i;
            }
            if (best == h.rows) break;  // column empty below r
            swap_rows(h, r, best);
            swap_rows(u, r, best);
            bool cleared = true;
            for (std::size_t i = r + 1; i < h.rows; ++i) {
                if (h(i, c) == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
                submul_row(h, i, r, q);
                submul_row(u, i, r, q);
                if (h(i, c) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            negate_row(h, r);
            negate_row(u, r);
        }
        // Reduce the entries above the pivot into [0, pivot).
        for (std::size_t i = 0; i < r; ++i) {
            Z q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
            submul_row(h, i, r, q);
            submul_row(u, i, r, q);
        }
        ++r;
    }
    res.rank = r;
    return res;
}

SnfResult snf(const ZMat& a) {
    SnfResult res;
    res.d = a;
    res.u = ZMat::identity(a.rows);
    res.v = ZMat::identity(a.cols);
    ZMat& d = res.d;
    ZMat& u = res.u;
    ZMat& v = res.v;

    auto swap_cols = [](ZMat& m, std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < m.rows; ++r) std::swap(m(r, i), m(r, j));
    };
    auto submul_col = [](ZMat& m, std::size_t i, std::size_t k, const Z& q) {
        if (q == 0) return;
        for (std::size_t r = 0; r < m.rows; ++r) m(r, i) -= q * m(r, k);
    };

    const std::size_t n = std::min(d.rows, d.cols);
    std::size_t t = 0;
    for (; t < n; ++t) {
        // Find a nonzero pivot in the trailing block.
        std::size_t pi = d.rows, pj = 0;
        for (std::size_t i = t; i < d.rows; ++i)
            for (std::size_t j = t; j < d.cols; ++j)
                if (d(i, j) != 0 &&
                    (pi == d.rows || cmpabs_z(d(i, j), d(pi, pj)) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi == d.rows) break;
        swap_rows(d, t, pi);
        swap_rows(u, t, pi);
        swap_cols(d, t, pj);
        swap_cols(v, t, pj);
        // Clear row and column t; restart if a division leaves a remainder
        // elsewhere (the classical pivot refinement loop).
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = t + 1; i < d.rows; ++i) {
                if (d(i, t) == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                submul_row(d, i, t, q);
                submul_row(u, i, t, q);
                if (d(i, t) != 0) {
                    swap_rows(d, t, i);
                    swap_rows(u, t, i);
                    dirty = true;
                }
            }
            for (std::size_t j = t + 1; j < d.cols; ++j) {
                if (d(t, j) == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                submul_col(d, j, t, q);
                submul_col(v, j, t, q);
                if (d(t, j) != 0) {
                    swap_cols(d, t, j);
                    swap_cols(v, t, j);
                    dirty = true;
                }
            }
        }
        if (d(t, t) < 0) {
            negate_row(d, t);
            negate_row(u, t);
        }
    }
    res.rank = t;
    // Enforce the divisibility chain d1 | d2 | ... by folding offenders.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < res.rank; ++i) {
            if (d(i + 1, i + 1) % d(i, i) == 0) continue;
            changed = true;
            // Add column i+1 to column i, then re-clear the 2x2 block.
            for (std::size_t r = 0; r < d.rows; ++r) d(r, i) += d(r, i + 1);
            for (std::size_t r = 0; r < v.rows; ++r) v(r, i) += v(r, i + 1);
            while (d(i + 1, i) != 0) {
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), d(i, i).get_mpz_t(), d(i + 1, i).get_mpz_t());
                // Euclidean step on rows i, i+1 restricted to the block.
                submul_row(d, i, i + 1, q);
                submul_row(u, i, i + 1, q);
                swap_rows(d, i, i + 1);
                swap_rows(u, i, i + 1);
            }
            if (d(i, i) < 0) {
                negate_row(d, i);
                negate_row(u, i);
            }
            // Clear the fill-in at (i, i+1).
            if (d(i, i + 1) != 0) {
                Z q = d(i, i + 1) / d(i, i);
                submul_col(d, i + 1, i, q);
                submul_col(v, i + 1, i, q);
            }
            if (d(i + 1, i + 1) < 0) {
                negate_row(d, i + 1);
                negate_row(u, i + 1);
            }
        }
    }
    return res;
}

ZMat left_kernel(const ZMat& a) {
    // HNF of [A | I]: rows whose A-part vanished record kernel combinations,
    // and because U is unimodular they form a saturated basis.
    ZMat aug(a.rows, a.cols + a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) aug(i, j) = a(i, j);
        aug(i, a.cols + i) = 1;
    }
    HnfResult h = hnf(aug);
    ZMat ker(0, a.rows);
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < a.rows; ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < a.cols && zero; ++j)
            if (h.h(i, j) != 0) zero = false;
        if (!zero) continue;
        bool all_zero = true;
        for (std::size_t j = 0; j < a.rows && all_zero; ++j)
            if (h.h(i, a.cols + j) != 0) all_zero = false;
        if (all_zero) continue;
        ZVec r(a.rows);
        for (std::size_t j = 0; j < a.rows; ++j) r[j] = h.h(i, a.cols + j);
        rows.push_back(std::move(r));
    }
    ker = ZMat(rows.size(), a.rows);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < a.rows; ++j) ker(i, j) = rows[i][j];
    return ker;
}

ZMat saturate_rows(const ZMat& a) {
    // Double-kernel: x lies in the saturation iff x annihilates the right
    // kernel of a.
    ZMat right = left_kernel(transpose(a));  // rows span { y : a*y^T = 0 }
    if (right.rows == 0) {
        // Full column rank: saturation is all of Z^cols only when a is
        // square of full rank; in general it is the HNF row span saturated,
        // which with empty right kernel is the whole ambient Z^cols.
        return ZMat::identity(a.cols);
    }
    return left_kernel(transpose(right));
}

std::optional<QVec> solve_left(const QMat& b, const QVec& v) {
    // Solve x * b = v: Gaussian elimination on the transposed system
    // b^T x^T = v^T, carrying the right-hand side.
    const std::size_t n = b.rows;   // unknowns
    const std::size_t m = b.cols;   // equations
    QMat aug(m, n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = b(j, i);
        aug(i, n) = v[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < m; ++c) {
        std::size_t p = rank;
        while (p < m && aug(p, c) == 0) ++p;
        if (p == m) continue;
        for (std::size_t j = 0; j <= n; ++j) std::swap(aug(rank, j), aug(p, j));
        Q inv = aug(rank, c);
        for (std::size_t j = 0; j <= n; ++j) aug(rank, j) /= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == rank || aug(i, c) == 0) continue;
            Q f = aug(i, c);
            for (std::size_t j = 0; j <= n; ++j) aug(i, j) -= f * aug(rank, j);
        }
        pivot_col.push_back(c);
        ++rank;
    }
    for (std::size_t i = rank; i < m; ++i)
        if (aug(i, n) != 0) return std::nullopt;
    QVec x(n, Q(0));
    for (std::size_t i = 0; i < rank; ++i) x[pivot_col[i]] = aug(i, n);
    return x;
}

std::pair<int, int> symmetric_signature(QMat g) {
    if (g.rows != g.cols) throw std::invalid_argument("signature: not square");
    const std::size_t n = g.rows;
    int plus = 0, minus = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (g(i, i) == 0) {
            // Bring a nonzero entry to the diagonal by congruence.
            std::size_t jd = n;
            for (std::size_t j = i + 1; j < n && jd == n; ++j)
                if (g(j, j) != 0) jd = j;
            if (jd != n) {
                for (std::size_t c = 0; c < n; ++c) std::swap(g(i, c), g(jd, c));
                for (std::size_t r = 0; r < n; ++r) std::swap(g(r, i), g(r, jd));
            } else {
                std::size_t jo = n;
                for (std::size_t j = i + 1; j < n && jo == n; ++j)
                    if (g(i, j) != 0) jo = j;
                if (jo == n) continue;  // row i is zero: degenerate direction
                // e_i += e_j makes the diagonal entry 2*b(e_i, e_j) != 0.
                for (std::size_t c = 0; c < n; ++c) g(i, c) += g(jo, c);
                for (std::size_t r = 0; r < n; ++r) g(r, i) += g(r, jo);
            }
        }
        if (g(i, i) == 0) continue;
        if (g(i, i) > 0)
            ++plus;
        else
            ++minus;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (g(j, i) == 0) continue;
            Q f = g(j, i) / g(i, i);
            for (std::size_t c = 0; c < n; ++c) g(j, c) -= f * g(i, c);
            for (std::size_t r = 0; r < n; ++r) g(r, j) -= f * g(i, r);
        }
    }
    return {plus, minus};
}

std::string to_string(const Q& q) {
    return q.get_str();
}

std::string to_string(const Z& z) {
    return z.get_str();
}

Q q_from_string(const std::string& s) {
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

}  // namespace k3lat
