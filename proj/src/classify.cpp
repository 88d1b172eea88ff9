#include "k3lat/classify.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace k3lat {

namespace {

// Builds a finite quadratic form from the table's polynomial coefficients:
// c(i,i) is the coefficient of x_i^2 (the q-value of generator i) and
// c(i,j) the coefficient of x_i x_j, equal to twice the pairing b(i,j).
FiniteQuadraticForm form_from_poly(const std::vector<Z>& orders,
                                   const std::vector<std::vector<Q>>& c) {
    std::size_t n = orders.size();
    QVec q(n);
    QMat b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = c[i][i];
        b(i, i) = c[i][i];
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) b(i, j) = c[i][j] / 2;
    }
    return make_form(orders, q, b);
}

Lattice sum3(const Lattice& a, const Lattice& b, const Lattice& c) {
    return direct_sum(direct_sum(a, b), c);
}

std::vector<CatalogRow> build_catalog() {
    Lattice u1 = hyperbolic_u();
    Lattice u2l = hyperbolic_u(2);
    Lattice u4 = hyperbolic_u(4);
    Lattice m2 = line_lattice(-2);
    Lattice p2 = line_lattice(2);
    Lattice m8 = line_lattice(-8);
    Lattice n = n3_lattice();

    std::vector<CatalogRow> rows;
    auto add = [&rows](int row, std::string name, Lattice l, std::size_t size,
                       int alpha, FiniteQuadraticForm printed) {
        rows.push_back({row, std::move(name), std::move(l), size, alpha,
                        std::move(printed)});
    };
    Q h(1, 2);

    add(1, "U+U+<-2>", sum3(u1, u1, m2), 1, 0,
        form_from_poly({2}, {{h}}));
    add(2, "U(2)+U+<-2>", sum3(u2l, u1, m2), 15, 1,
        form_from_poly({2, 2, 2}, {{0, 1, 0}, {1, 0, 0}, {0, 0, -h}}));
    add(3, "U+U+<-8>", sum3(u1, u1, m8), 10, 1,
        form_from_poly({8}, {{Q(-1, 8)}}));
    add(4, "U+N", direct_sum(u1, n), 6, 1,
        form_from_poly({8}, {{Q(3, 8)}}));
    add(5, "U(4)+U+<-2>", sum3(u4, u1, m2), 20, 2,
        form_from_poly({4, 4, 2}, {{0, h, 0}, {h, 0, 0}, {0, 0, -h}}));
    add(6, "U(2)+U(2)+<-2>", sum3(u2l, u2l, m2), 15, 2,
        form_from_poly({2, 2, 2, 2, 2}, {{0, 1, 0, 0, 0},
                                         {1, 0, 0, 0, 0},
                                         {0, 0, 0, 1, 0},
                                         {0, 0, 1, 0, 0},
                                         {0, 0, 0, 0, -h}}));
    add(7, "U(2)+U+<-8>", sum3(u2l, u1, m8), 45, 2,
        form_from_poly({2, 2, 8}, {{0, 1, 0}, {1, 0, 0}, {0, 0, Q(-1, 8)}}));
    add(8, "U+<-2>+<2>+<-8>", direct_sum(sum3(u1, m2, p2), m8), 60, 2,
        form_from_poly({2, 2, 8}, {{-h, 0, 0}, {0, h, 0}, {0, 0, Q(-1, 8)}}));
    add(9, "U(2)+N", direct_sum(u2l, n), 15, 2,
        form_from_poly({2, 2, 8}, {{0, 1, 0}, {1, 0, 0}, {0, 0, Q(3, 8)}}));
    add(10, "U(4)+U(2)+<-2>", sum3(u4, u2l, m2), 15, 3,
        form_from_poly({4, 4, 2, 2, 2}, {{0, h, 0, 0, 0},
                                         {h, 0, 0, 0, 0},
                                         {0, 0, 0, 1, 0},
                                         {0, 0, 1, 0, 0},
                                         {0, 0, 0, 0, -h}}));
    add(11, "U(4)+U+<-8>", sum3(u4, u1, m8), 60, 3,
        form_from_poly({4, 4, 8}, {{0, h, 0}, {h, 0, 0}, {0, 0, Q(-1, 8)}}));
    add(12, "U(4)+N", direct_sum(u4, n), 20, 3,
        form_from_poly({4, 4, 8}, {{-h, h, 1}, {h, 0, 0}, {1, 0, Q(3, 8)}}));
    add(13, "U(2)+U(2)+<-8>", sum3(u2l, u2l, m8), 15, 3,
        form_from_poly({2, 2, 2, 2, 8}, {{0, 1, 0, 0, 0},
                                         {1, 0, 0, 0, 0},
                                         {0, 0, 0, 1, 0},
                                         {0, 0, 1, 0, 0},
                                         {0, 0, 0, 0, Q(-1, 8)}}));
    add(14, "<2>+<2>+<-2>+<-2>+<-8>",
        direct_sum(direct_sum(sum3(p2, p2, m2), m2), m8), 45, 3,
        form_from_poly({2, 2, 2, 2, 8}, {{h, 0, 0, 0, 0},
                                         {0, h, 0, 0, 0},
                                         {0, 0, -h, 0, 0},
                                         {0, 0, 0, -h, 0},
                                         {0, 0, 0, 0, Q(-1, 8)}}));
    add(15, "U(4)+U(4)+<-2>", sum3(u4, u4, m2), 1, 4,
        form_from_poly({4, 4, 4, 4, 2}, {{0, h, 0, 0, 0},
                                         {h, 0, 0, 0, 0},
                                         {0, 0, 0, h, 0},
                                         {0, 0, h, 0, 0},
                                         {0, 0, 0, 0, -h}}));
    add(16, "U(4)+U(2)+<-8>", sum3(u4, u2l, m8), 15, 4,
        form_from_poly({2, 2, 4, 4, 8}, {{0, 1, 0, 0, 0},
                                         {1, 0, 0, 0, 0},
                                         {0, 0, 0, h, 0},
                                         {0, 0, h, 0, 0},
                                         {0, 0, 0, 0, Q(-1, 8)}}));
    add(17, "U(4)+<2>+<-2>+<-8>", direct_sum(sum3(u4, p2, m2), m8), 15, 4,
        form_from_poly({2, 2, 4, 4, 8}, {{h, 0, 0, 0, 0},
                                         {0, -h, 0, 0, 0},
                                         {0, 0, 0, h, 0},
                                         {0, 0, h, 0, 0},
                                         {0, 0, 0, 0, Q(-1, 8)}}));
    return rows;
}

std::string rep_string(const F2Subspace& s) {
    std::string out;
    for (F2Vec v : s.basis) {
        if (!out.empty()) out += ",";
        out += f2_vec_string(v);
    }
    return out.empty() ? "0" : out;
}

}  // namespace

Lattice ambient_five_lattice() {
    return sum3(hyperbolic_u(), hyperbolic_u(), line_lattice(-2));
}

Lattice sublattice_from_subspace(const F2Subspace& u) {
    Lattice ambient = ambient_five_lattice();
    QMat gens(5 + u.basis.size(), 5);
    for (std::size_t i = 0; i < 5; ++i) gens(i, i) = 2;
    for (std::size_t k = 0; k < u.basis.size(); ++k)
        for (std::size_t i = 0; i < 5; ++i)
            gens(5 + k, i) = (u.basis[k] >> i) & 1u;
    return lattice_from_generators(ambient.space, gens);
}

const std::vector<CatalogRow>& table_catalog() {
    static const std::vector<CatalogRow> catalog = [] {
        std::vector<CatalogRow> rows = build_catalog();
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                if (rows[i].printed_form.group_order() !=
                    rows[j].printed_form.group_order())
                    continue;
                if (form_iso(rows[i].printed_form, rows[j].printed_form))
                    throw std::logic_error(
                        "catalog rows " + std::to_string(rows[i].row) + " and " +
                        std::to_string(rows[j].row) +
                        " carry isomorphic printed forms");
            }
        return rows;
    }();
    return catalog;
}

const std::vector<FiniteQuadraticForm>& catalog_computed_forms() {
    static const std::vector<FiniteQuadraticForm> forms = [] {
        std::vector<FiniteQuadraticForm> out;
        for (const CatalogRow& r : table_catalog())
            out.push_back(discriminant_form(r.lattice));
        return out;
    }();
    return forms;
}

std::vector<CatalogCheck> catalog_self_check() {
    std::vector<CatalogCheck> out;
    const auto& catalog = table_catalog();
    const auto& computed = catalog_computed_forms();
    for (std::size_t i = 0; i < catalog.size(); ++i)
        out.push_back({catalog[i].row,
                       form_iso(catalog[i].printed_form, computed[i]).has_value()});
    return out;
}

std::optional<int> match_row(const Lattice& t) {
    const auto& catalog = table_catalog();
    const auto& computed = catalog_computed_forms();
    FiniteQuadraticForm d = discriminant_form(t);
    Signature s = signature(t);
    std::optional<int> found;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        if (t.rank() != catalog[i].lattice.rank()) continue;
        if (!(s == signature(catalog[i].lattice))) continue;
        if (d.orders != computed[i].orders) continue;
        if (form_iso(d, computed[i])) {
            if (found)
                throw AmbiguousMatch("lattice matches catalog rows " +
                                     std::to_string(*found) + " and " +
                                     std::to_string(catalog[i].row));
            found = catalog[i].row;
        }
    }
    return found;
}

Condition3Trace condition3_check(const Lattice& t, int alpha) {
    if (t.rank() != 5)
        throw std::invalid_argument("condition3_check expects a rank-5 lattice");
    Condition3Trace tr;
    tr.alpha = alpha;
    FiniteQuadraticForm d = discriminant_form(t);
    FiniteQuadraticForm q2 = p_part(d, 2);
    tr.l2 = length_p(d, 2);
    tr.triggered = 2 * (alpha + 3) == 5 + tr.l2;
    FiniteQuadraticForm probe = q2;
    for (int i = 0; i < 4 - alpha; ++i) probe = direct_sum_forms(probe, u2_form());
    tr.excluded = has_odd_order2_summand(probe);
    if (tr.triggered && !tr.excluded) {
        PadicDetClass k = kq_det(q2, 2);
        tr.realized = k;
        PadicDetClass dcls = padic_class(d.group_order(), 2);
        Z prod;
        mpz_fdiv_r_ui(prod.get_mpz_t(), Z(dcls.unit * k.unit).get_mpz_t(), 8);
        bool ok = dcls.valuation == k.valuation && (prod == 1 || prod == 7);
        tr.satisfied = ok;
        tr.status = ok ? "pass" : "fail";
    } else {
        tr.satisfied = true;
        tr.status = "vacuous";
    }
    return tr;
}

Classification classify() {
    const auto& catalog = table_catalog();
    Classification out;
    out.total = 0;

    for (const F2Orbit& o : subspace_orbits()) {
        ClassRow r;
        r.rep = o.rep;
        r.orbit_size = o.size;
        r.alpha = o.alpha;
        r.lattice = sublattice_from_subspace(o.rep);
        r.disc = discriminant_form(r.lattice);
        r.matched_row = match_row(r.lattice);
        r.condition3 = condition3_check(r.lattice, o.alpha);
        out.total += o.size;

        if (!r.matched_row) {
            out.discrepancies.push_back("orbit with representative " +
                                        rep_string(o.rep) +
                                        " matched no catalog row");
        } else {
            const CatalogRow& c = catalog[static_cast<std::size_t>(*r.matched_row - 1)];
            if (c.expected_size != o.size)
                out.discrepancies.push_back(
                    "catalog row " + std::to_string(c.row) + " expected size " +
                    std::to_string(c.expected_size) + " but the orbit has " +
                    std::to_string(o.size));
            if (c.alpha != o.alpha)
                out.discrepancies.push_back(
                    "catalog row " + std::to_string(c.row) +
                    " expected alpha " + std::to_string(c.alpha) + " but found " +
                    std::to_string(o.alpha));
        }
        if (!r.condition3.satisfied)
            out.discrepancies.push_back("arithmetic condition fails for orbit " +
                                        rep_string(o.rep));
        out.rows.push_back(std::move(r));
    }

    std::map<int, int> hits;
    for (const ClassRow& r : out.rows)
        if (r.matched_row) hits[*r.matched_row]++;
    for (const CatalogRow& c : catalog) {
        if (hits[c.row] == 0)
            out.discrepancies.push_back("catalog row " + std::to_string(c.row) +
                                        " matched by no orbit");
        else if (hits[c.row] > 1)
            out.discrepancies.push_back("catalog row " + std::to_string(c.row) +
                                        " matched by several orbits");
    }
    if (out.total != 373)
        out.discrepancies.push_back("covered " + std::to_string(out.total) +
                                    " subspaces, expected 373");

    for (const CatalogCheck& c : catalog_self_check())
        if (!c.printed_matches_computed)
            out.discrepancies.push_back(
                "catalog row " + std::to_string(c.row) +
                ": printed form differs from the form computed from its Gram "
                "matrix");

    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [](const ClassRow& a, const ClassRow& b) {
                         int ra = a.matched_row.value_or(99);
                         int rb = b.matched_row.value_or(99);
                         return ra < rb;
                     });
    return out;
}

}  // namespace k3lat
