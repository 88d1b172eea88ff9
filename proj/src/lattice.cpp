// lattice.cpp — construction and exact operations on even lattices.
#include "k3lat/lattice.hpp"

#include <stdexcept>
#include <utility>

namespace k3lat {

QuadSpace QuadSpace::from_gram(QMat g) {
    if (g.rows == 0 || g.rows != g.cols)
        throw std::invalid_argument("QuadSpace: gram must be square and nonempty");
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = i + 1; j < g.cols; ++j)
            if (g(i, j) != g(j, i))
                throw std::invalid_argument("QuadSpace: gram not symmetric");
    if (det(g) == 0) throw std::invalid_argument("QuadSpace: gram degenerate");
    QuadSpace s;
    s.dim = g.rows;
    s.gram = std::move(g);
    return s;
}

QuadSpace QuadSpace::from_gram(const ZMat& g) { return from_gram(to_q(g)); }

namespace {

// Canonical basis of the group generated by the rows: Hermite form over the
// least common denominator.  Scaling the denominator scales the Hermite
// form, so the result depends only on the generated subgroup.
QMat canonical_basis(const QMat& generators) {
    Z den = 1;
    for (const Q& e : generators.a)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.get_den().get_mpz_t());
    ZMat scaled(generators.rows, generators.cols);
    for (std::size_t i = 0; i < generators.a.size(); ++i) {
        Q v = generators.a[i] * Q(den);
        scaled.a[i] = v.get_num();
    }
    HnfResult h = hnf(scaled);
    QMat basis(h.rank, generators.cols);
    for (std::size_t i = 0; i < h.rank; ++i)
        for (std::size_t j = 0; j < generators.cols; ++j)
            basis(i, j) = Q(h.h(i, j)) / Q(den);
    return basis;
}

Lattice build(const QuadSpace& space, const QMat& generators, bool require_even) {
    if (generators.cols != space.dim)
        throw std::invalid_argument("lattice: generator width != space dim");
    Lattice l;
    l.space = space;
    l.generators = generators;
    l.basis = canonical_basis(generators);
    QMat pair = mul(mul(l.basis, space.gram), transpose(l.basis));
    auto z = to_z(pair);
    if (!z)
        throw NonIntegralPairing("lattice: basis vectors pair to a non-integer");
    l.gram = std::move(*z);
    if (require_even) {
        for (std::size_t i = 0; i < l.gram.rows; ++i)
            if (l.gram(i, i) % 2 != 0)
                throw OddNorm("lattice: basis vector with odd self-product");
    }
    l.even = require_even;
    return l;
}

}  // namespace

Lattice lattice_from_generators(const QuadSpace& space, const QMat& generators) {
    return build(space, generators, true);
}

Lattice lattice_from_generators_allow_odd(const QuadSpace& space,
                                          const QMat& generators) {
    return build(space, generators, false);
}

Lattice lattice_from_gram(const ZMat& gram) {
    QuadSpace s = QuadSpace::from_gram(gram);
    return build(s, to_q(ZMat::identity(s.dim)), true);
}

Lattice lattice_from_gram_allow_odd(const ZMat& gram) {
    QuadSpace s = QuadSpace::from_gram(gram);
    return build(s, to_q(ZMat::identity(s.dim)), false);
}

Z determinant(const Lattice& l) { return det(l.gram); }

Signature signature(const Lattice& l) {
    auto [p, m] = symmetric_signature(to_q(l.gram));
    return Signature{p, m};
}

Lattice rescale(const Lattice& l, const Z& m) {
    if (m == 0) throw std::invalid_argument("rescale: m must be nonzero");
    QMat g = l.space.gram;
    for (Q& e : g.a) e *= Q(m);
    QuadSpace s = QuadSpace::from_gram(std::move(g));
    return build(s, l.basis, true);
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
    const std::size_t n = a.space.dim + b.space.dim;
    QMat g(n, n);
    for (std::size_t i = 0; i < a.space.dim; ++i)
        for (std::size_t j = 0; j < a.space.dim; ++j) g(i, j) = a.space.gram(i, j);
    for (std::size_t i = 0; i < b.space.dim; ++i)
        for (std::size_t j = 0; j < b.space.dim; ++j)
            g(a.space.dim + i, a.space.dim + j) = b.space.gram(i, j);
    QMat gens(a.rank() + b.rank(), n);
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = 0; j < a.space.dim; ++j) gens(i, j) = a.basis(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
        for (std::size_t j = 0; j < b.space.dim; ++j)
            gens(a.rank() + i, a.space.dim + j) = b.basis(i, j);
    return build(QuadSpace::from_gram(std::move(g)), gens, a.even && b.even);
}

ZMat coefficients_in(const Lattice& sub, const Lattice& super) {
    if (sub.space != super.space)
        throw NotSublattice("coefficients_in: lattices live in different spaces");
    QMat basis_q = super.basis;
    ZMat c(sub.rank(), super.rank());
    for (std::size_t i = 0; i < sub.rank(); ++i) {
        auto x = solve_left(basis_q, sub.basis.row(i));
        if (!x) throw NotSublattice("coefficients_in: vector outside super");
        for (std::size_t j = 0; j < super.rank(); ++j) {
            if ((*x)[j].get_den() != 1)
                throw NotSublattice("coefficients_in: non-integer coefficient");
            c(i, j) = (*x)[j].get_num();
        }
    }
    return c;
}

Z index_in(const Lattice& sub, const Lattice& super) {
    ZMat c = coefficients_in(sub, super);
    if (sub.rank() != super.rank())
        throw NotSublattice("index_in: ranks differ, index not finite");
    SnfResult s = snf(c);
    if (s.rank != c.rows)
        throw NotSublattice("index_in: coefficient matrix singular");
    Z idx = 1;
    for (std::size_t i = 0; i < s.rank; ++i) idx *= s.d(i, i);
    return idx;
}

Lattice orthogonal_complement(const Lattice& sub, const Lattice& ambient) {
    coefficients_in(sub, ambient);  // containment gate
    QMat pair_q = mul(mul(ambient.basis, ambient.space.gram), transpose(sub.basis));
    auto pair = to_z(pair_q);
    if (!pair)
        throw NotSublattice("orthogonal_complement: non-integral cross pairing");
    ZMat k = left_kernel(*pair);
    QMat gens = mul(to_q(k), ambient.basis);
    return build(ambient.space, gens, ambient.even);
}

Lattice saturation(const Lattice& sub, const Lattice& ambient) {
    ZMat c = coefficients_in(sub, ambient);
    ZMat sat = saturate_rows(c);
    QMat gens = mul(to_q(sat), ambient.basis);
    return build(ambient.space, gens, ambient.even);
}

bool is_member(const QVec& v, const Lattice& l) {
    if (v.size() != l.space.dim)
        throw std::invalid_argument("is_member: vector width != space dim");
    auto x = solve_left(l.basis, v);
    if (!x) return false;
    for (const Q& e : *x)
        if (e.get_den() != 1) return false;
    return true;
}

QMat dual_basis(const Lattice& l) {
    // Rows of G^{-1} B: solve y_i * G = e_i, then d_i = y_i * B.
    const std::size_t r = l.rank();
    QMat gq = to_q(l.gram);
    QMat d(r, l.space.dim);
    for (std::size_t i = 0; i < r; ++i) {
        QVec e(r, Q(0));
        e[i] = 1;
        auto y = solve_left(gq, e);
        if (!y) throw std::invalid_argument("dual_basis: degenerate Gram");
        QVec row = mul_vec(*y, l.basis);
        for (std::size_t j = 0; j < l.space.dim; ++j) d(i, j) = row[j];
    }
    return d;
}

Lattice hyperbolic_u(const Z& m) {
    ZMat g(2, 2);
    g(0, 1) = m;
    g(1, 0) = m;
    return lattice_from_gram(g);
}

Lattice line_lattice(const Z& even_norm) {
    ZMat g(1, 1);
    g(0, 0) = even_norm;
    return lattice_from_gram(g);
}

Lattice e8_lattice(const Z& m) {
    // Chain 1-2-3-4-5-6-7 with node 8 attached to node 5; even, det 1.
    static const long rows[8][8] = {
        {2, -1, 0, 0, 0, 0, 0, 0},
        {-1, 2, -1, 0, 0, 0, 0, 0},
        {0, -1, 2, -1, 0, 0, 0, 0},
        {0, 0, -1, 2, -1, 0, 0, 0},
        {0, 0, 0, -1, 2, -1, 0, -1},
        {0, 0, 0, 0, -1, 2, -1, 0},
        {0, 0, 0, 0, 0, -1, 2, 0},
        {0, 0, 0, 0, -1, 0, 0, 2},
    };
    ZMat g(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) g(i, j) = rows[i][j] * m;
    return lattice_from_gram(g);
}

Lattice nikulin_lattice() {
    // c_i . c_j = -2 delta_ij together with (1/2)(c_1 + ... + c_8).
    ZMat diag(8, 8);
    for (int i = 0; i < 8; ++i) diag(i, i) = -2;
    QuadSpace s = QuadSpace::from_gram(diag);
    QMat gens(9, 8);
    for (int i = 0; i < 8; ++i) gens(i, i) = 1;
    for (int j = 0; j < 8; ++j) gens(8, j) = Q(1, 2);
    return lattice_from_generators(s, gens);
}

Lattice n3_lattice() {
    static const long rows[3][3] = {{2, 1, 2}, {1, -2, 0}, {2, 0, 0}};
    ZMat g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = rows[i][j];
    return lattice_from_gram(g);
}

}  // namespace k3lat
