// Identification of the rank-5 sublattices attached to subspaces of F_2^5
// against the seventeen-row reference table.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "k3lat/discform.hpp"
#include "k3lat/f2.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

// The rank-5 even lattice U + U + <-2>.  Halving its Gram modulo 2
// reproduces quad_value on 0/1 coordinate vectors, which ties subspaces of
// F_2^5 to sublattices between 2L and L.
Lattice ambient_five_lattice();

// Preimage of the subspace under reduction modulo 2: generated by twice the
// ambient basis together with 0/1 lifts of the subspace basis.  Any other
// choice of lifts differs by an element of 2L, so the result is
// well-defined.  Rank 5 with |det| = 2 * 4^(5 - dim).
Lattice sublattice_from_subspace(const F2Subspace& u);

// One reference-table entry.  `printed_form` transcribes the table's q
// polynomial literally; the form computed from the Gram matrix is the
// matching authority (see catalog_self_check for where the two disagree).
struct CatalogRow {
    int row = 0;  // 1..17
    std::string name;
    Lattice lattice;
    std::size_t expected_size = 0;
    int alpha = 0;
    FiniteQuadraticForm printed_form;
};

// The frozen table.  On first use validates that the printed discriminant
// forms are pairwise non-isomorphic, which keeps row matching well-posed.
const std::vector<CatalogRow>& table_catalog();

// Discriminant forms computed from the catalog Gram matrices, row order.
const std::vector<FiniteQuadraticForm>& catalog_computed_forms();

struct CatalogCheck {
    int row = 0;
    bool printed_matches_computed = false;
};

// Compares each printed form against the computed one via form_iso.
std::vector<CatalogCheck> catalog_self_check();

// Unique catalog row with the same rank, signature and discriminant-form
// class; nullopt when nothing matches.  Throws AmbiguousMatch if two rows
// match, which the catalog invariant rules out.
std::optional<int> match_row(const Lattice& t);

// Trace of the arithmetic condition on a rank-5 lattice at codimension
// alpha.  The condition only has content when the 2-length equals
// 2*alpha + 1 and the form (q)_2 + u(2)^(4-alpha) has no odd order-2
// summand; it then compares |D| with the determinant class of a lattice
// realizing (q)_2.  status is "pass", "vacuous" or "fail".
struct Condition3Trace {
    int alpha = 0;
    int l2 = 0;
    bool triggered = false;
    bool excluded = false;
    std::optional<PadicDetClass> realized;
    bool satisfied = true;
    std::string status;
};

Condition3Trace condition3_check(const Lattice& t, int alpha);

struct ClassRow {
    F2Subspace rep;
    std::size_t orbit_size = 0;
    int alpha = 0;
    Lattice lattice;
    FiniteQuadraticForm disc;
    std::optional<int> matched_row;
    Condition3Trace condition3;
};

struct Classification {
    std::vector<ClassRow> rows;  // ordered by matched row, unmatched last
    std::size_t total = 0;       // subspaces covered by the orbits
    // Human-readable deviation records; an exact run still carries the
    // pinned note about the row-1 printed form.
    std::vector<std::string> discrepancies;
};

// Full pipeline: orbits, sublattices, condition trace, row matching,
// catalog self-check.  Deviations become records, never crashes.
Classification classify();

}  // namespace k3lat
