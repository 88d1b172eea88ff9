// test_lattice.cpp — even lattice constructions, invariants, complements.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "k3lat/lattice.hpp"
#include "test_util.hpp"

using namespace k3lat;
using k3lat::testing::qmat_of;
using k3lat::testing::zmat_of;

namespace {

// Ambient of a once-blown-up double plane: <4> plus sixteen <-2> classes.
QuadSpace kummer_ambient() {
    ZMat g(17, 17);
    g(0, 0) = 4;
    for (int i = 1; i < 17; ++i) g(i, i) = -2;
    return QuadSpace::from_gram(g);
}

Lattice t_a() {
    return direct_sum(direct_sum(hyperbolic_u(), hyperbolic_u()),
                      line_lattice(-2));
}

}  // namespace

TEST_CASE("identity generators reproduce the ambient form") {
    QuadSpace s = kummer_ambient();
    Lattice l = lattice_from_generators(s, to_q(ZMat::identity(17)));
    CHECK(l.rank() == 17);
    CHECK(to_q(l.gram) == s.gram);
    CHECK(signature(l) == Signature{1, 16});
}

TEST_CASE("half-integral generator with fractional pairing is rejected") {
    QuadSpace u = QuadSpace::from_gram(zmat_of({{0, 1}, {1, 0}}));
    QMat gens = qmat_of({{Q(1), Q(0)}, {Q(0), Q(1)}, {Q(1, 2), Q(1, 2)}});
    CHECK_THROWS_AS(lattice_from_generators(u, gens), NonIntegralPairing);
}

TEST_CASE("odd self-product is rejected unless allowed explicitly") {
    QuadSpace s = QuadSpace::from_gram(zmat_of({{1}}));
    QMat gens = qmat_of({{Q(1)}});
    CHECK_THROWS_AS(lattice_from_generators(s, gens), OddNorm);
    Lattice l = lattice_from_generators_allow_odd(s, gens);
    CHECK(l.rank() == 1);
    CHECK(l.gram(0, 0) == 1);
    CHECK_FALSE(l.even);
}

TEST_CASE("determinants of pinned lattices") {
    CHECK(determinant(t_a()) == -2);
    CHECK(determinant(n3_lattice()) == 8);
    Lattice unimodular = direct_sum(
        direct_sum(direct_sum(hyperbolic_u(), hyperbolic_u()), hyperbolic_u()),
        direct_sum(e8_lattice(-1), e8_lattice(-1)));
    CHECK(unimodular.rank() == 22);
    // Signed determinant: 19 negative eigenvalues, so -1; unimodular.
    CHECK(determinant(unimodular) == -1);
    CHECK(signature(unimodular) == Signature{3, 19});
}

TEST_CASE("signatures of pinned lattices") {
    CHECK(signature(hyperbolic_u()) == Signature{1, 1});
    CHECK(signature(e8_lattice(-1)) == Signature{0, 8});
    CHECK(signature(e8_lattice(1)) == Signature{8, 0});
    // Leading principal minors 2, -5, 8 give one positive direction.
    CHECK(signature(n3_lattice()) == Signature{1, 2});
    CHECK(signature(nikulin_lattice()) == Signature{0, 8});
}

TEST_CASE("rescale scales the form and the determinant") {
    Lattice u2 = rescale(hyperbolic_u(), 2);
    CHECK(u2.gram == zmat_of({{0, 2}, {2, 0}}));
    CHECK(rescale(line_lattice(-2), 4).gram == zmat_of({{-8}}));
    // det scales by m^rank: rank 5, det -2.
    CHECK(determinant(rescale(t_a(), 2)) == -64);
    CHECK(signature(rescale(t_a(), -1)) == Signature{3, 2});
}

TEST_CASE("direct sums multiply determinants and add signatures") {
    Lattice a = direct_sum(hyperbolic_u(), line_lattice(-2));
    CHECK(a.rank() == 3);
    CHECK(a.gram == zmat_of({{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}));
    CHECK(determinant(direct_sum(direct_sum(hyperbolic_u(4), hyperbolic_u(4)),
                                 line_lattice(-2))) == -512);
    CHECK(determinant(direct_sum(hyperbolic_u(), n3_lattice())) == -8);
    Lattice b = direct_sum(e8_lattice(-1), n3_lattice());
    Signature sa = signature(e8_lattice(-1));
    Signature sn = signature(n3_lattice());
    CHECK(signature(b) == Signature{sa.plus + sn.plus, sa.minus + sn.minus});
}

TEST_CASE("nikulin lattice invariants") {
    Lattice n = nikulin_lattice();
    CHECK(n.rank() == 8);
    CHECK(determinant(n) == 64);
    // (1/2) sum c_i is a member, c_1 / 2 is not.
    QVec half(8, Q(1, 2));
    CHECK(is_member(half, n));
    QVec c1half(8, Q(0));
    c1half[0] = Q(1, 2);
    CHECK_FALSE(is_member(c1half, n));
}

TEST_CASE("index of finite-index sublattices") {
    Lattice ta = t_a();
    QMat doubled = ta.basis;
    for (Q& e : doubled.a) e *= 2;
    Lattice two_ta = lattice_from_generators(ta.space, doubled);
    CHECK(index_in(two_ta, ta) == 32);
    CHECK(index_in(ta, ta) == 1);
    CHECK_THROWS_AS(index_in(ta, two_ta), NotSublattice);
    // Index-square law.
    CHECK(determinant(two_ta) == 32 * 32 * determinant(ta));
}

TEST_CASE("complement of an isotropic line is the line itself") {
    QuadSpace u = QuadSpace::from_gram(zmat_of({{0, 1}, {1, 0}}));
    Lattice full = lattice_from_generators(u, to_q(ZMat::identity(2)));
    Lattice line = lattice_from_generators(u, qmat_of({{Q(1), Q(0)}}));
    Lattice comp = orthogonal_complement(line, full);
    CHECK(comp.rank() == 1);
    CHECK(comp.basis == line.basis);
}

TEST_CASE("complement is primitive and orthogonal") {
    Lattice ta = t_a();
    Lattice sub = lattice_from_generators(
        ta.space, qmat_of({{Q(1), Q(1), Q(0), Q(0), Q(0)}}));
    Lattice comp = orthogonal_complement(sub, ta);
    CHECK(comp.rank() == 4);
    // Orthogonality of every pair of basis vectors across the two parts.
    QMat cross = mul(mul(comp.basis, ta.space.gram), transpose(sub.basis));
    for (const Q& e : cross.a) CHECK(e == 0);
    // Primitivity: saturation is a fixed point.
    Lattice sat = saturation(comp, ta);
    CHECK(sat.basis == comp.basis);
    // Double complement recovers the primitive closure of sub.
    Lattice back = orthogonal_complement(comp, ta);
    CHECK(back.basis == saturation(sub, ta).basis);
}

TEST_CASE("saturation examples") {
    Lattice ta = t_a();
    QMat doubled = ta.basis;
    for (Q& e : doubled.a) e *= 2;
    Lattice two_ta = lattice_from_generators(ta.space, doubled);
    CHECK(saturation(two_ta, ta).basis == ta.basis);
    // Idempotence.
    Lattice sub = lattice_from_generators(
        ta.space, qmat_of({{Q(2), Q(0), Q(4), Q(0), Q(0)}}));
    Lattice sat = saturation(sub, ta);
    CHECK(saturation(sat, ta).basis == sat.basis);
    CHECK(index_in(sub, sat) == 2);
}

TEST_CASE("membership is an exact solve") {
    Lattice ta = t_a();
    CHECK(is_member(QVec(5, Q(0)), ta));
    QVec v{Q(1), Q(2), Q(-3), Q(0), Q(5)};
    CHECK(is_member(v, ta));
    QVec w{Q(1, 2), Q(0), Q(0), Q(0), Q(0)};
    CHECK_FALSE(is_member(w, ta));
}

TEST_CASE("dual basis pairs to the identity") {
    Lattice n = n3_lattice();
    QMat d = dual_basis(n);
    QMat pair = mul(mul(d, n.space.gram), transpose(n.basis));
    CHECK(pair == to_q(ZMat::identity(3)));
}

TEST_CASE("deterministic basis for permuted generators") {
    QuadSpace s = kummer_ambient();
    QMat g1 = qmat_of({{Q(1), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0),
                        Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0)},
                       {Q(0), Q(2), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0),
                        Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0)}});
    QMat g2 = qmat_of({{Q(0), Q(2), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0),
                        Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0)},
                       {Q(1), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0),
                        Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0)},
                       {Q(1), Q(2), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0),
                        Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0), Q(0)}});
    Lattice a = lattice_from_generators(s, g1);
    Lattice b = lattice_from_generators(s, g2);
    CHECK(a.basis == b.basis);
    CHECK(a.gram == b.gram);
}

TEST_CASE("degenerate sublattices are legal values") {
    QuadSpace u = QuadSpace::from_gram(zmat_of({{0, 1}, {1, 0}}));
    Lattice line = lattice_from_generators(u, qmat_of({{Q(3), Q(0)}}));
    CHECK(line.rank() == 1);
    CHECK(determinant(line) == 0);
    Signature sig = signature(line);
    CHECK(sig == Signature{0, 0});
}

TEST_CASE("random sublattices satisfy the index-square law") {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<long> entry(-3, 3);
    Lattice ta = t_a();
    int degenerate_skips = 0;
    for (int trial = 0; trial < 40; ++trial) {
        ZMat c(5, 5);
        for (auto& e : c.a) e = entry(rng);
        if (det(c) == 0) {
            ++degenerate_skips;
            continue;
        }
        Lattice sub = lattice_from_generators(ta.space, mul(to_q(c), ta.basis));
        Z idx = index_in(sub, ta);
        CHECK(determinant(sub) == idx * idx * determinant(ta));
    }
    CHECK(degenerate_skips < 40);
}
