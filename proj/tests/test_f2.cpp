// test_f2.cpp — the quadratic space F_2^5 and its subspace orbits.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "k3lat/f2.hpp"

using namespace k3lat;

TEST_CASE("quadratic and polar values") {
    CHECK(quad_value(0) == 0);
    CHECK(quad_value(0b00001) == 0);   // e1
    CHECK(quad_value(0b10000) == 1);   // e5
    CHECK(quad_value(0b00011) == 1);   // e1 + e2
    CHECK(quad_value(0b01100) == 1);   // e3 + e4
    CHECK(quad_value(0b00101) == 0);   // e1 + e3
    CHECK(quad_value(0b11111) == 1);

    CHECK(polar_value(1, 2) == 1);
    CHECK(polar_value(1, 4) == 0);
    CHECK(polar_value(4, 8) == 1);
    // e5 spans the radical of the polar form.
    for (F2Vec v = 0; v < 32; ++v) CHECK(polar_value(v, 0b10000) == 0);
    // Parallelogram identity defining the polar form.
    for (F2Vec u = 0; u < 32; ++u)
        for (F2Vec v = 0; v < 32; ++v)
            CHECK(polar_value(u, v) ==
                  (quad_value(u ^ v) ^ quad_value(u) ^ quad_value(v)));
}

TEST_CASE("span and mask validation") {
    F2Subspace line = f2_span({3});
    CHECK(line.dim == 1);
    CHECK(line.mask == 0b1001u);
    CHECK(line.basis == std::vector<F2Vec>{3});

    F2Subspace plane = f2_span({1, 2});
    CHECK(plane.dim == 2);
    CHECK(plane.mask == 0b1111u);
    CHECK(plane.basis == std::vector<F2Vec>{1, 2});

    // Echelon basis is canonical regardless of the generators given.
    CHECK(f2_span({3, 1}) == f2_span({1, 2}));

    CHECK(f2_subspace_from_mask(0b1001).dim == 1);
    CHECK_THROWS(f2_subspace_from_mask(0b0110));   // misses zero
    CHECK_THROWS(f2_subspace_from_mask(0b0111));   // 1+2=3 missing
}

TEST_CASE("subspace census by dimension") {
    std::vector<F2Subspace> all = all_f2_subspaces();
    CHECK(all.size() == 374);
    std::map<int, int> by_dim;
    for (const auto& s : all) by_dim[s.dim]++;
    CHECK(by_dim[0] == 1);
    CHECK(by_dim[1] == 31);
    CHECK(by_dim[2] == 155);
    CHECK(by_dim[3] == 155);
    CHECK(by_dim[4] == 31);
    CHECK(by_dim[5] == 1);
    // Lexicographic order and uniqueness.
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        CHECK(f2_subspace_lex_less(all[i], all[i + 1]));
}

TEST_CASE("orthogonal group order and action") {
    const auto& group = orthogonal_group();
    CHECK(group.size() == 720);
    for (const auto& g : group)
        for (F2Vec v = 0; v < 32; ++v)
            CHECK(quad_value(apply_isometry(g, v)) == quad_value(v));
    // Images of a basis span everything: each map is invertible.
    for (const auto& g : group) {
        F2Subspace image = f2_span({g[0], g[1], g[2], g[3], g[4]});
        CHECK(image.dim == 5);
    }
    // Closure on a sample pair.
    F2Isometry a = group[1], b = group[2];
    F2Isometry ab;
    for (int i = 0; i < 5; ++i)
        ab[static_cast<std::size_t>(i)] =
            apply_isometry(a, b[static_cast<std::size_t>(i)]);
    CHECK(std::find(group.begin(), group.end(), ab) != group.end());
}

TEST_CASE("orbit decomposition of positive-dimensional subspaces") {
    std::vector<F2Orbit> orbits = subspace_orbits();
    REQUIRE(orbits.size() == 17);

    std::size_t total = 0;
    for (const auto& o : orbits) {
        total += o.size;
        CHECK(o.alpha == 5 - o.dim);
        CHECK(720 % o.size == 0);
    }
    CHECK(total == 373);

    // Size lists per dimension, orbits ordered by representative.
    std::map<int, std::vector<std::size_t>> sizes;
    for (const auto& o : orbits) sizes[o.dim].push_back(o.size);
    for (auto& [dim, v] : sizes) std::sort(v.begin(), v.end());
    CHECK(sizes[5] == std::vector<std::size_t>{1});
    CHECK(sizes[4] == std::vector<std::size_t>{6, 10, 15});
    CHECK(sizes[3] == std::vector<std::size_t>{15, 15, 20, 45, 60});
    CHECK(sizes[2] == std::vector<std::size_t>{15, 15, 20, 45, 60});
    CHECK(sizes[1] == std::vector<std::size_t>{1, 15, 15});

    // Orbits arrive with ascending alpha.
    for (std::size_t i = 0; i + 1 < orbits.size(); ++i)
        CHECK(orbits[i].alpha <= orbits[i + 1].alpha);

    // Pinned representatives at the extremes.
    CHECK(orbits.front().rep.mask == 0xFFFFFFFFu);
    CHECK(orbits.front().size == 1);
    // The radical line is a singleton orbit.
    bool radical_seen = false;
    for (const auto& o : orbits)
        if (o.dim == 1 && o.size == 1) {
            radical_seen = true;
            CHECK(o.rep.mask == ((1u << 16) | 1u));
        }
    CHECK(radical_seen);
}

TEST_CASE("fixed subspaces stay fixed and sizes count distinct images") {
    const auto& group = orthogonal_group();
    F2Subspace radical = f2_span({0b10000});
    for (const auto& g : group)
        CHECK(apply_isometry(g, radical) == radical);
}

TEST_CASE("vector rendering") {
    CHECK(f2_vec_string(0) == "00000");
    CHECK(f2_vec_string(0b00001) == "10000");
    CHECK(f2_vec_string(0b10010) == "01001");
    CHECK(f2_vec_string(0b11111) == "11111");
}
