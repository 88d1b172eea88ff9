// lattice.hpp — even lattices presented as generator matrices inside a
// rational quadratic space: invariants, sublattice and complement
// constructions, all over exact arithmetic.
//
// A Lattice value is immutable after construction and every operation is a
// pure function, so values are safe to share across threads.
#pragma once

#include <cstddef>

#include "k3lat/errors.hpp"
#include "k3lat/zmat.hpp"

namespace k3lat {

// Ambient quadratic space: a nondegenerate symmetric bilinear form on Q^dim.
struct QuadSpace {
    std::size_t dim = 0;
    QMat gram;  // dim x dim, symmetric, det != 0

    static QuadSpace from_gram(QMat g);
    static QuadSpace from_gram(const ZMat& g);

    bool operator==(const QuadSpace&) const = default;
};

struct Signature {
    int plus = 0;
    int minus = 0;

    bool operator==(const Signature&) const = default;
};

// A finitely generated subgroup of a QuadSpace with integral, even Gram.
// `basis` is the canonical row-Hermite basis of the group over its common
// denominator, so equal subgroups always carry equal basis matrices.
// `even` records which construction rule was applied; the odd escape hatch
// exists only for realization searches and is kept off the classification
// path.
struct Lattice {
    QuadSpace space;
    QMat generators;  // as supplied, k x dim
    QMat basis;       // canonical, rank x dim
    ZMat gram;        // rank x rank, Gram of basis rows
    bool even = true;

    std::size_t rank() const { return basis.rows; }
};

// Build a lattice from generating rows.  Throws NonIntegralPairing when two
// group elements pair to a non-integer, OddNorm when some element has odd
// self-product.  Degenerate groups (isotropic spans) are legal values.
Lattice lattice_from_generators(const QuadSpace& space, const QMat& generators);

// Escape hatch used by realization searches: same construction without the
// even-norm requirement.  Integral pairings are still enforced.
Lattice lattice_from_generators_allow_odd(const QuadSpace& space,
                                          const QMat& generators);

// Abstract lattice on its own Gram matrix: space = the form itself, basis =
// identity.  The Gram must be symmetric, nondegenerate and even.
Lattice lattice_from_gram(const ZMat& gram);
Lattice lattice_from_gram_allow_odd(const ZMat& gram);

// Determinant of the basis Gram, sign included.
Z determinant(const Lattice& l);

// Sylvester signature (t+, t-) of the basis Gram.  For nondegenerate
// lattices plus + minus = rank; degenerate directions count toward neither.
Signature signature(const Lattice& l);

// Same module with the form scaled by m.  Throws OddNorm when the scaled
// lattice fails to be even.
Lattice rescale(const Lattice& l, const Z& m);

// Orthogonal direct sum; Grams stack block diagonally.
Lattice direct_sum(const Lattice& a, const Lattice& b);

// Integer coefficient matrix C with basis(sub) = C * basis(super).
// Throws NotSublattice when the spaces differ or containment fails.
ZMat coefficients_in(const Lattice& sub, const Lattice& super);

// Index [super : sub] for a finite-index sublattice, via the Smith normal
// form of the change-of-basis matrix.  Throws NotSublattice when
// containment fails or the ranks differ.
Z index_in(const Lattice& sub, const Lattice& super);

// Primitive sublattice of `ambient` of all vectors orthogonal to `sub`.
// For nondegenerate sub the rank is rank(ambient) - rank(sub); an isotropic
// sub may intersect its own complement.
Lattice orthogonal_complement(const Lattice& sub, const Lattice& ambient);

// Smallest primitive sublattice of `ambient` containing `sub`
// (the rational span of sub intersected with ambient).
Lattice saturation(const Lattice& sub, const Lattice& ambient);

// True iff v is an integer combination of basis vectors.
bool is_member(const QVec& v, const Lattice& l);

// Rows d_1..d_r with d_i . b_j = delta_ij against the basis rows; these
// represent the dual lattice inside the ambient space.
QMat dual_basis(const Lattice& l);

// Standard building blocks.
Lattice hyperbolic_u(const Z& m = 1);          // U(m): [[0,m],[m,0]]
Lattice line_lattice(const Z& even_norm);      // <k> for even k
Lattice e8_lattice(const Z& m = -1);           // E8(m); E8 is even, det 1
Lattice nikulin_lattice();                     // rank 8, det 64: {c_i}, (1/2) sum c_i
Lattice n3_lattice();                          // rank 3, det 8 table block

}  // namespace k3lat
