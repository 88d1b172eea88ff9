// The rank-17 Neron-Severi lattice of a general Kummer surface: sixteen
// nodes, sixteen tropes, the switch involution, even-eight tests and the
// twisted E8 embedding check.
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "k3lat/errors.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

inline constexpr std::size_t kKummerDim = 17;

// Coordinate order: L, E0, then E_ij lexicographic for 1 <= i < j <= 6.
const std::array<std::string, kKummerDim>& kummer_basis_names();

// A divisor class in ambient coordinates; everything in scope has
// denominators dividing 2.
struct DivisorClass {
    QVec coords = QVec(kKummerDim);

    bool operator==(const DivisorClass&) const = default;
};

DivisorClass operator+(const DivisorClass& a, const DivisorClass& b);
DivisorClass operator-(const DivisorClass& a, const DivisorClass& b);
DivisorClass operator*(const Q& c, const DivisorClass& v);

// Pairing under the diagonal form (4, -2 x 16).
Q pairing(const DivisorClass& v, const DivisorClass& w);

// Renders a class as a signed sum of named basis vectors, e.g.
// "3/2*L - 3/2*E0 - E12".
std::string divisor_string(const DivisorClass& v);

struct KummerNS {
    QuadSpace ambient;
    Lattice lattice;  // rank 17, det 64, signature (1,16)
    // The 17 basis classes plus the 16 tropes C0, C12..C16, C23..C56.
    std::map<std::string, DivisorClass> named;
};

// Builds the lattice from the node classes and trope relations, then
// validates rank, determinant, signature, trope norms, the 16_6 incidence
// and the involution action.  A violated invariant throws std::logic_error.
// The result is cached; the returned reference stays valid.
const KummerNS& build_sy();

bool sy_member(const DivisorClass& v);

// The involution: L -> 3L - 4E0, E0 -> 2L - 3E0, nodes E_ij fixed.  It is
// an isometry of order two; it fixes C0 and C_1j and shifts the remaining
// tropes by L - 2E0.
DivisorClass alpha_action(const DivisorClass& v);

struct EvenEightReport {
    bool norms_ok = false;        // every class has self-product -2
    bool orthogonal_ok = false;   // pairwise products vanish
    bool half_sum_in_lattice = false;
    bool verdict = false;         // conjunction of the three
    DivisorClass half_sum;
    QMat pairing_matrix;          // 8x8 products, for reports
};

// Lattice-level even-eight test: verdict plus the half-sum witness.
EvenEightReport is_even_eight(const std::array<DivisorClass, 8>& classes);

// Named preset classes: the three eights e1..e8, a1..a8, b1..b8, the fiber
// classes D and B, the component sums DF1..DF7 and BF1..BF6 of their
// fibrations, and the printed variants kept for divergence reports
// (e5_printed, BF5_printed, a_sum_displayed, b_sum_displayed).
const std::map<std::string, DivisorClass>& preset_classes();

// Report of the twisted-E8 embedding check inside the orthogonal
// complement of the Nikulin lattice spanned by the a-eight.
struct TwistReport {
    ZMat twist_gram;      // rank-8 target Gram: e7^2 = -4, e6.e7 = 2
    Z twist_gram_det;     // -4
    Lattice nikulin_sublattice;  // N, rank 8, det 64
    Lattice complement;          // N-perp in S_Y, rank 9
    Z complement_det;            // +4

    // Classes of norm -2/-4 in N-perp harvested from the documented
    // generators (nodes, tropes, and the two doubled combinations).
    std::vector<std::string> candidate_names;
    ZMat candidate_gram;
    std::size_t documented_solutions = 0;  // copies of the Gram found there

    std::size_t search_pool = 0;  // norm -2/-4 sign-classes in the wide search
    bool resolved = false;        // widened search produced a valid eight
    std::array<DivisorClass, 8> resolution;
    std::vector<std::string> resolution_names;
    bool resolution_primitive = false;  // saturated span inside N-perp
    Z extended_span_det;    // det of the eight plus the doubled combination
    Z extended_span_index;  // its index in N-perp

    std::vector<std::string> notes;
};

// Runs both search stages.  Throws NotFound only if the widened search
// also fails; the documented stage coming up empty is reported as data.
TwistReport twist_check();

// Parses a linear expression in the named generators, e.g.
// "3L - 2E0 + 1/2*C12 - E34".  Coefficients are integers or fractions p/q;
// '*' is optional.  Throws std::invalid_argument on malformed input or
// unknown names.
DivisorClass parse_divisor_expression(const std::string& text);

}  // namespace k3lat
