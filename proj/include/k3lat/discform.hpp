// discform.hpp — finite quadratic forms on finite abelian groups:
// discriminant forms of even lattices, the overlattice correspondence,
// glue construction, isomorphism testing, p-adic determinant classes and
// the primitive-embedding criterion.
//
// Conventions: q takes values in Q/2Z stored reduced into [0,2); b takes
// values in Q/Z stored in [0,1).  Group elements are integer coordinate
// vectors modulo the generator orders.
#pragma once

#include <optional>
#include <vector>

#include "k3lat/errors.hpp"
#include "k3lat/lattice.hpp"
#include "k3lat/zmat.hpp"

namespace k3lat {

// Element of a finite abelian group in generator coordinates.
using FElement = std::vector<Z>;

struct FiniteQuadraticForm {
    std::vector<Z> orders;  // cyclic factor orders, each >= 2; empty = trivial
    QVec q_values;          // q(g_i), reduced into [0,2)
    QMat b_matrix;          // b(g_i,g_j), reduced into [0,1), symmetric

    std::size_t ngen() const { return orders.size(); }
    Z group_order() const;

    bool operator==(const FiniteQuadraticForm&) const = default;
};

// Validating constructor: checks symmetry, denominator bounds
// (d_i * b_ij integral, 2 d_i * q_i integral mod the stated ranges) and the
// diagonal compatibility b(g,g) = q(g) mod 1.
FiniteQuadraticForm make_form(std::vector<Z> orders, QVec q, QMat b);

FiniteQuadraticForm trivial_form();
// Cyclic group Z/d with q(g) = value (reduced mod 2).
FiniteQuadraticForm cyclic_form(const Z& d, const Q& value);
// u(2): (Z/2)^2 with q = 0 on generators and b(g1,g2) = 1/2.
FiniteQuadraticForm u2_form();
// Orthogonal sum; generators of b follow those of a.
FiniteQuadraticForm direct_sum_forms(const FiniteQuadraticForm& a,
                                     const FiniteQuadraticForm& b);

// Values on arbitrary elements.
Q form_q(const FiniteQuadraticForm& f, const FElement& x);   // in [0,2)
Q form_b(const FiniteQuadraticForm& f, const FElement& x,
         const FElement& y);                                  // in [0,1)
Z element_order(const FiniteQuadraticForm& f, const FElement& x);

// Every group element in lexicographic coordinate order.
// Throws TooLarge beyond 2^16 elements.
std::vector<FElement> all_elements(const FiniteQuadraticForm& f);

struct Subgroup {
    FiniteQuadraticForm parent;
    std::vector<FElement> elements;  // sorted lexicographically, contains 0
    ZMat gens;                       // generating rows in parent coordinates

    std::size_t size() const { return elements.size(); }
};

Subgroup subgroup_from_generators(const FiniteQuadraticForm& f, const ZMat& gens);
Subgroup trivial_subgroup(const FiniteQuadraticForm& f);

// p-adic square class of a nonzero determinant: p^valuation * unit where
// the unit is canonical (mod 8 for p = 2; for odd p, 1 for squares and the
// smallest positive non-residue otherwise).
struct PadicDetClass {
    Z p;
    unsigned long valuation = 0;
    Z unit = 1;

    bool operator==(const PadicDetClass&) const = default;
};

PadicDetClass padic_class(const Z& d, const Z& p);
PadicDetClass negate(const PadicDetClass& c);

// Discriminant group D = L*/L with generator lift vectors in the ambient
// space (rows of `lifts` represent the chosen generators).
struct DiscGroup {
    FiniteQuadraticForm form;
    QMat lifts;
};

DiscGroup disc_group(const Lattice& l);
FiniteQuadraticForm discriminant_form(const Lattice& l);

// Restriction to the p-primary component.
FiniteQuadraticForm p_part(const FiniteQuadraticForm& f, const Z& p);

// Minimal number of generators: max over p of the p-part cyclic count.
int length(const FiniteQuadraticForm& f);
int length_p(const FiniteQuadraticForm& f, const Z& p);

// All subgroups on which q vanishes identically, with at most `max_order`
// elements each; deterministic order (by size, then lexicographic).
std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticForm& f,
                                          const Z& max_order);

// Even overlattice with L'/L = H; requires H isotropic in D_L.
Lattice overlattice(const Lattice& l, const Subgroup& h);

// Overlattice of T + S along the graph of xi: h_i -> row i of xi_images,
// defined on the subgroup h of D_T.  xi must be an injective homomorphism
// into D_S with q_S(xi h) = -q_T(h) and b anticompatible, so that the graph
// is isotropic in D_T + D_S.
Lattice glue(const Lattice& t, const Lattice& s, const Subgroup& h,
             const ZMat& xi_images);

// Isomorphism of finite quadratic forms: a group isomorphism preserving q.
// Returns generator images of f1 in f2 coordinates, or nullopt once the
// backtracking search certifies absence.  Throws TooLarge beyond the
// enumeration guard.
std::optional<ZMat> form_iso(const FiniteQuadraticForm& f1,
                             const FiniteQuadraticForm& f2);

// Determinant class of an even lattice of rank l(q) realizing the p-primary
// form q: bounded Gram search (entries up to 32 in absolute value,
// determinant matching the group order exactly), verified through
// discriminant_form + form_iso.  Throws RealizationNotFound when the bound
// is exhausted.
PadicDetClass kq_det(const FiniteQuadraticForm& q, const Z& p);

// True iff the 2-primary form splits off an orthogonal cyclic order-2
// summand with q-value 1/2 or 3/2.  Such a summand is nondegenerate for b,
// so existence of an order-2 element with that q-value is equivalent.
bool has_odd_order2_summand(const FiniteQuadraticForm& q2);

struct EmbedCondition {
    int id = 0;  // 1..4
    bool triggered = false;
    bool holds = true;
};

struct EmbedDecision {
    bool embeds = false;
    std::vector<EmbedCondition> conditions;  // always four entries
};

// Primitive-embedding criterion for an even lattice with signature `sig`
// and discriminant form `q` into an even unimodular lattice of signature
// `target`:
//   (1) target signature balanced mod 8;
//   (2) rank and length inequalities;
//   (3) determinant class test at odd primes with rank equality;
//   (4) determinant class test at 2 under rank equality, waived when the
//       form splits off an odd order-2 summand.
EmbedDecision nikulin_embedding_exists(const Signature& sig,
                                       const FiniteQuadraticForm& q,
                                       const Signature& target);

struct TechnicalLemmaResult {
    int l_group = 0;     // l(D)
    int l_h = 0;         // l(H)
    int l_quotient = 0;  // l(H_perp / H)
    bool holds = false;  // l(D) - 2 l(H) <= l(H_perp / H)
};

// For a 2-group form and an isotropic subgroup H: computes H_perp under b,
// the induced form on H_perp / H, and checks the length inequality.
TechnicalLemmaResult technical_lemma_check(const FiniteQuadraticForm& q,
                                           const Subgroup& h);

// Glue data onto length-alpha 2-elementary subgroups: pairs of (subgroup
// generators in d_t coordinates, image rows in d_s coordinates) such that
// the graph is isotropic in d_t + d_s.  Solutions are produced in a fixed
// exploration order, at most max_count of them; distinct solutions may
// glue to non-isomorphic overlattices, so callers filter by the invariant
// they need.
std::vector<std::pair<ZMat, ZMat>> glue_maps(const FiniteQuadraticForm& d_t,
                                             const FiniteQuadraticForm& d_s,
                                             int alpha, std::size_t max_count);

std::optional<std::pair<ZMat, ZMat>> find_glue_map(
    const FiniteQuadraticForm& d_t, const FiniteQuadraticForm& d_s, int alpha);

}  // namespace k3lat
