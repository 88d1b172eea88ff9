#include "k3lat/f2.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace k3lat {

namespace {

constexpr F2SetMask kZeroOnly = 1u;

std::vector<F2Vec> members_of(F2SetMask mask) {
    std::vector<F2Vec> out;
    for (F2Vec v = 0; v < 32; ++v)
        if (mask >> v & 1u) out.push_back(v);
    return out;
}

std::vector<F2Vec> echelon_basis(F2SetMask mask) {
    // Gaussian elimination over the member list; rows sorted ascending.
    std::vector<F2Vec> rows;
    for (F2Vec v : members_of(mask)) {
        F2Vec r = v;
        for (F2Vec p : rows) r = std::min(r, r ^ p);
        if (r != 0) {
            rows.push_back(r);
            // Reduce earlier rows so the basis is in reduced form.
            for (F2Vec& p : rows)
                if (p != r) p = std::min(p, p ^ r);
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

F2SetMask extend_mask(F2SetMask mask, F2Vec v) {
    F2SetMask out = mask;
    for (F2Vec x : members_of(mask)) out |= 1u << (x ^ v);
    return out;
}

F2Subspace subspace_of_mask(F2SetMask mask) {
    F2Subspace s;
    s.mask = mask;
    s.basis = echelon_basis(mask);
    s.dim = static_cast<int>(s.basis.size());
    return s;
}

}  // namespace

int quad_value(F2Vec v) {
    return static_cast<int>(((v & v >> 1) ^ (v >> 2 & v >> 3) ^ v >> 4) & 1u);
}

int polar_value(F2Vec u, F2Vec v) {
    return quad_value(u ^ v) ^ quad_value(u) ^ quad_value(v);
}

F2Subspace f2_span(const std::vector<F2Vec>& gens) {
    F2SetMask mask = kZeroOnly;
    for (F2Vec g : gens) {
        if (g >= 32) throw std::invalid_argument("f2_span: vector out of range");
        if (!(mask >> g & 1u)) mask = extend_mask(mask, g);
    }
    return subspace_of_mask(mask);
}

F2Subspace f2_subspace_from_mask(F2SetMask mask) {
    if (!(mask & 1u)) throw std::invalid_argument("mask misses the zero vector");
    for (F2Vec x : members_of(mask))
        for (F2Vec y : members_of(mask))
            if (!(mask >> (x ^ y) & 1u))
                throw std::invalid_argument("mask is not closed under addition");
    return subspace_of_mask(mask);
}

std::vector<F2Subspace> all_f2_subspaces() {
    std::set<F2SetMask> seen{kZeroOnly};
    std::vector<F2SetMask> queue{kZeroOnly};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        F2SetMask mask = queue[i];
        for (F2Vec v = 1; v < 32; ++v) {
            if (mask >> v & 1u) continue;
            F2SetMask bigger = extend_mask(mask, v);
            if (seen.insert(bigger).second) queue.push_back(bigger);
        }
    }
    std::vector<F2Subspace> out;
    out.reserve(seen.size());
    for (F2SetMask mask : seen) out.push_back(subspace_of_mask(mask));
    std::sort(out.begin(), out.end(), f2_subspace_lex_less);
    return out;
}

bool f2_subspace_lex_less(const F2Subspace& a, const F2Subspace& b) {
    F2SetMask d = a.mask ^ b.mask;
    if (d == 0) return false;
    return (a.mask & (d & -d)) != 0;
}

F2Vec apply_isometry(const F2Isometry& g, F2Vec v) {
    F2Vec out = 0;
    for (int i = 0; i < kF2Dim; ++i)
        if (v >> i & 1u) out ^= g[static_cast<std::size_t>(i)];
    return out;
}

F2Subspace apply_isometry(const F2Isometry& g, const F2Subspace& s) {
    F2SetMask mask = 0;
    for (F2Vec v : members_of(s.mask)) mask |= 1u << apply_isometry(g, v);
    return subspace_of_mask(mask);
}

const std::vector<F2Isometry>& orthogonal_group() {
    static const std::vector<F2Isometry> group = [] {
        // Images must reproduce q on the basis and the polar values
        // b(e1,e2) = b(e3,e4) = 1 (all other pairs 0); the sum formula
        // q(u+v) = q(u) + q(v) + b(u,v) then extends q-preservation to
        // every vector.  Independence of the images gives invertibility.
        constexpr std::array<int, 5> q_target{0, 0, 0, 0, 1};
        auto b_target = [](int i, int j) {
            return ((i == 0 && j == 1) || (i == 1 && j == 0) ||
                    (i == 2 && j == 3) || (i == 3 && j == 2))
                       ? 1
                       : 0;
        };
        std::vector<F2Isometry> out;
        F2Isometry g{};
        auto extend = [&](auto&& self, int k, F2SetMask span) -> void {
            if (k == kF2Dim) {
                out.push_back(g);
                return;
            }
            for (F2Vec v = 1; v < 32; ++v) {
                if (span >> v & 1u) continue;  // dependent image
                if (quad_value(v) != q_target[static_cast<std::size_t>(k)])
                    continue;
                bool ok = true;
                for (int j = 0; j < k && ok; ++j)
                    ok = polar_value(g[static_cast<std::size_t>(j)], v) ==
                         b_target(j, k);
                if (!ok) continue;
                g[static_cast<std::size_t>(k)] = v;
                self(self, k + 1, extend_mask(span, v));
            }
        };
        extend(extend, 0, kZeroOnly);
        return out;
    }();
    return group;
}

std::vector<F2Orbit> subspace_orbits() {
    const std::vector<F2Isometry>& group = orthogonal_group();
    std::vector<F2Subspace> all = all_f2_subspaces();
    std::set<F2SetMask> assigned;
    std::vector<F2Orbit> orbits;
    // Subspaces arrive in lexicographic order, so the first unassigned
    // member of each orbit is its least representative.
    for (const F2Subspace& s : all) {
        if (s.dim == 0 || assigned.count(s.mask)) continue;
        std::set<F2SetMask> orbit;
        for (const F2Isometry& g : group) orbit.insert(apply_isometry(g, s).mask);
        assigned.insert(orbit.begin(), orbit.end());
        F2Orbit o;
        o.rep = s;
        o.dim = s.dim;
        o.size = orbit.size();
        o.alpha = kF2Dim - s.dim;
        orbits.push_back(std::move(o));
    }
    std::stable_sort(orbits.begin(), orbits.end(),
                     [](const F2Orbit& a, const F2Orbit& b) {
                         if (a.dim != b.dim) return a.dim > b.dim;
                         return f2_subspace_lex_less(a.rep, b.rep);
                     });
    return orbits;
}

std::string f2_vec_string(F2Vec v) {
    std::string s(kF2Dim, '0');
    for (int i = 0; i < kF2Dim; ++i)
        if (v >> i & 1u) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

}  // namespace k3lat
