// Subspaces of F_2^5 under the quadratic form q = x1 x2 + x3 x4 + x5^2
// and the action of its orthogonal group.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace k3lat {

// A vector lives in the low five bits; bit i holds the coordinate x_{i+1}.
using F2Vec = std::uint32_t;

inline constexpr int kF2Dim = 5;

// q(v) in {0, 1}.  The polar form b(u, v) = q(u+v) + q(u) + q(v) has
// radical spanned by e5, on which q itself is nonzero.
int quad_value(F2Vec v);
int polar_value(F2Vec u, F2Vec v);

// Characteristic mask over the 32 vectors; bit v is set iff v is a member.
using F2SetMask = std::uint32_t;

struct F2Subspace {
    F2SetMask mask = 1;        // every subspace contains the zero vector
    std::vector<F2Vec> basis;  // reduced echelon rows, ascending as integers
    int dim = 0;

    bool operator==(const F2Subspace&) const = default;
};

F2Subspace f2_span(const std::vector<F2Vec>& gens);
// Validates that the mask is closed under addition.
F2Subspace f2_subspace_from_mask(F2SetMask mask);

// All 374 subspaces, ordered lexicographically (see f2_subspace_lex_less).
std::vector<F2Subspace> all_f2_subspaces();

// Lexicographic comparison of the sorted member lists: the smaller subspace
// is the one containing the lowest vector on which the two differ.
bool f2_subspace_lex_less(const F2Subspace& a, const F2Subspace& b);

// An isometry is determined by the images of e_1..e_5.
using F2Isometry = std::array<F2Vec, 5>;

F2Vec apply_isometry(const F2Isometry& g, F2Vec v);
F2Subspace apply_isometry(const F2Isometry& g, const F2Subspace& s);

// The full group of invertible linear maps preserving q; 720 elements.
const std::vector<F2Isometry>& orthogonal_group();

struct F2Orbit {
    F2Subspace rep;  // lexicographically least member of the orbit
    int dim = 0;
    std::size_t size = 0;
    int alpha = 0;  // codimension, 5 - dim
};

// Orbits of positive-dimensional subspaces, ordered by descending dimension
// and then by representative; 373 subspaces in 17 orbits.
std::vector<F2Orbit> subspace_orbits();

// "x1 x2 x3 x4 x5" rendered as five '0'/'1' characters.
std::string f2_vec_string(F2Vec v);

}  // namespace k3lat
