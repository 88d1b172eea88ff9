// Golden-check aggregation.  Each entry recomputes one block of frozen
// facts; expected divergences from the printed source are pushed as
// records, and the report passes only when the record set is exactly the
// pinned one.
#include "k3lat/selftest.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "k3lat/classify.hpp"
#include "k3lat/discform.hpp"
#include "k3lat/f2.hpp"
#include "k3lat/fibration.hpp"
#include "k3lat/kummer.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

namespace {

void run_entry(SelfTestReport& rep, const std::string& name, const std::string& provenance,
               const std::function<bool(std::string&)>& body) {
    SelfTestEntry e;
    e.name = name;
    e.provenance = provenance;
    try {
        e.passed = body(e.detail);
    } catch (const std::exception& ex) {
        e.passed = false;
        e.detail = std::string("exception: ") + ex.what();
    }
    rep.entries.push_back(std::move(e));
}

std::array<DivisorClass, 8> preset_eight(const std::string& prefix) {
    std::array<DivisorClass, 8> out;
    for (int i = 0; i < 8; ++i) out[i] = preset_classes().at(prefix + std::to_string(i + 1));
    return out;
}

FiberConfiguration make_config(const std::string& fibers, int rho, bool section,
                               std::optional<int> order, std::optional<int> rank_expected) {
    FiberConfiguration c;
    c.fibers = parse_fiber_string(fibers);
    c.ns_rank = rho;
    c.has_section = section;
    c.mw_order = order;
    c.mw_rank_expected = rank_expected;
    return c;
}

std::string audit_detail(const AuditReport& r) {
    std::string out;
    for (const AuditItem& item : r.items) {
        if (!out.empty()) out += "; ";
        out += item.detail;
    }
    return out;
}

}  // namespace

const std::vector<std::string>& known_discrepancy_ids() {
    static const std::vector<std::string> ids = {
        "catalog-row-1-q-sign", "even-eight-e5-sign",   "a-half-sum-display",
        "b-fiber-5-print",      "twist-generator-list", "fiber-configuration-chi",
    };
    return ids;
}

SelfTestReport run_selftest() {
    SelfTestReport rep;
    std::optional<Classification> cls;
    std::optional<TwistReport> twist;

    run_entry(rep, "hyperbolic-plane", "derived", [](std::string& d) {
        Lattice u = hyperbolic_u();
        d = "det -1, signature (1,1), trivial discriminant group";
        return determinant(u) == -1 && signature(u) == Signature{1, 1} &&
               discriminant_form(u).ngen() == 0;
    });

    run_entry(rep, "e8-root-lattice", "derived", [](std::string& d) {
        Lattice e8 = e8_lattice(-1);
        d = "E8(-1): rank 8, det 1, signature (0,8), unimodular";
        return e8.rank() == 8 && determinant(e8) == 1 && signature(e8) == Signature{0, 8} &&
               discriminant_form(e8).ngen() == 0;
    });

    run_entry(rep, "k3-lattice", "printed", [](std::string& d) {
        Lattice u = hyperbolic_u();
        Lattice l = direct_sum(direct_sum(u, u), u);
        l = direct_sum(l, direct_sum(e8_lattice(-1), e8_lattice(-1)));
        d = "U^3 + E8(-1)^2: rank 22, det -1, signature (3,19)";
        return l.rank() == 22 && determinant(l) == -1 && signature(l) == Signature{3, 19};
    });

    run_entry(rep, "nikulin-lattice", "printed", [](std::string& d) {
        Lattice n = nikulin_lattice();
        FiniteQuadraticForm dn = discriminant_form(n);
        d = "rank 8, det 64, signature (0,8), discriminant group (Z/2)^6";
        return n.rank() == 8 && determinant(n) == 64 && signature(n) == Signature{0, 8} &&
               dn.orders == std::vector<Z>(6, 2);
    });

    run_entry(rep, "rank3-table-block", "printed", [](std::string& d) {
        Lattice n3 = n3_lattice();
        d = "rank 3, det 8, signature (1,2)";
        return n3.rank() == 3 && determinant(n3) == 8 && signature(n3) == Signature{1, 2};
    });

    run_entry(rep, "row9-discriminant-form", "printed", [](std::string& d) {
        Lattice t9 = direct_sum(hyperbolic_u(2), n3_lattice());
        FiniteQuadraticForm computed = discriminant_form(t9);
        QMat b(3, 3);
        b(0, 1) = b(1, 0) = Q(1, 2);
        b(2, 2) = Q(3, 8);
        FiniteQuadraticForm printed = make_form({2, 2, 8}, {Q(0), Q(0), Q(3, 8)}, b);
        std::vector<Z> orders = computed.orders;
        std::sort(orders.begin(), orders.end());
        d = "U(2) + rank-3 block: orders [2,2,8], printed x1*x2 + 3/8*x3^2 matches computed";
        return orders == std::vector<Z>{2, 2, 8} && form_iso(printed, computed).has_value();
    });

    run_entry(rep, "p-primary-splitting", "derived", [](std::string& d) {
        FiniteQuadraticForm whole = cyclic_form(6, Q(1, 6));
        FiniteQuadraticForm two = p_part(whole, 2);
        FiniteQuadraticForm three = p_part(whole, 3);
        d = "Z/6 with q = 1/6 splits into its 2-part and 3-part";
        return two.group_order() == 2 && three.group_order() == 3 && length(whole) == 1 &&
               form_iso(direct_sum_forms(two, three), whole).has_value();
    });

    run_entry(rep, "kq-det-classes", "derived", [](std::string& d) {
        d = "3/8 on Z/8: 2^3 unit 3; u(2): 2^2 unit 7; 2/3 on Z/3: 3^1 unit 2";
        return kq_det(cyclic_form(8, Q(3, 8)), 2) == PadicDetClass{2, 3, 3} &&
               kq_det(u2_form(), 2) == PadicDetClass{2, 2, 7} &&
               kq_det(cyclic_form(3, Q(2, 3)), 3) == PadicDetClass{3, 1, 2};
    });

    run_entry(rep, "technical-lemma-cases", "derived", [](std::string& d) {
        FiniteQuadraticForm f = u2_form();
        ZMat gen(1, 2);
        gen(0, 0) = 1;
        TechnicalLemmaResult r = technical_lemma_check(f, subgroup_from_generators(f, gen));
        TechnicalLemmaResult t = technical_lemma_check(f, trivial_subgroup(f));
        d = "u(2): l(D) - 2 l(H) <= l(H_perp/H) for the order-2 and trivial subgroups";
        return r.l_group == 2 && r.l_h == 1 && r.l_quotient == 0 && r.holds && t.l_group == 2 &&
               t.l_h == 0 && t.l_quotient == 2 && t.holds;
    });

    run_entry(rep, "e8-minus-two-embedding", "derived", [](std::string& d) {
        FiniteQuadraticForm d8 = discriminant_form(e8_lattice(-2));
        EmbedDecision e = nikulin_embedding_exists({0, 8}, d8, {3, 19});
        d = "E8(-2) embeds primitively into signature (3,19); rank-equality clauses untriggered";
        return e.embeds && !e.conditions[2].triggered && !e.conditions[3].triggered;
    });

    run_entry(rep, "orthogonal-group-order", "printed", [](std::string& d) {
        d = "|O(q)| = 720 for q = x1x2 + x3x4 + x5^2 on F_2^5";
        return orthogonal_group().size() == 720;
    });

    run_entry(rep, "subspace-census", "printed", [](std::string& d) {
        std::size_t covered = 0;
        for (const F2Orbit& o : subspace_orbits()) covered += o.size;
        d = "374 subspaces; 17 orbits cover the 373 of positive dimension";
        return all_f2_subspaces().size() == 374 && subspace_orbits().size() == 17 &&
               covered == 373;
    });

    run_entry(rep, "orbit-size-arithmetic", "derived", [](std::string& d) {
        std::multiset<std::size_t> sizes;
        std::map<int, std::size_t> by_dim;
        bool divides = true;
        for (const F2Orbit& o : subspace_orbits()) {
            sizes.insert(o.size);
            by_dim[o.dim] += o.size;
            if (720 % o.size != 0) divides = false;
        }
        const std::multiset<std::size_t> expected = {1,  15, 10, 6,  20, 15, 45, 60, 15,
                                                     15, 60, 20, 15, 45, 1,  15, 15};
        d = "per-dimension totals 1/31/155/155/31 for dims 5..1; every orbit size divides 720";
        return sizes == expected && divides && by_dim[5] == 1 && by_dim[4] == 31 &&
               by_dim[3] == 155 && by_dim[2] == 155 && by_dim[1] == 31;
    });

    run_entry(rep, "catalog-forms", "printed", [&rep](std::string& d) {
        bool row1_diverges = false, others_match = true;
        for (const CatalogCheck& c : catalog_self_check()) {
            if (c.row == 1)
                row1_diverges = !c.printed_matches_computed;
            else
                others_match = others_match && c.printed_matches_computed;
        }
        if (row1_diverges)
            rep.discrepancies.push_back(
                {"catalog-row-1-q-sign",
                 "reference-table row 1 prints q = 1/2*x^2 on the order-2 generator; the Gram "
                 "matrix gives 3/2*x^2",
                 "rows are matched on the computed forms; the printed sign does not occur as "
                 "a discriminant form of the ambient lattice"});
        const std::vector<FiniteQuadraticForm>& forms = catalog_computed_forms();
        bool distinct = true;
        for (std::size_t i = 0; i < forms.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < forms.size() && distinct; ++j)
                if (form_iso(forms[i], forms[j]).has_value()) distinct = false;
        d = "rows 2..17 printed = computed, row 1 differs; the 17 computed forms are "
            "pairwise non-isomorphic";
        return row1_diverges && others_match && distinct;
    });

    run_entry(rep, "classification-table", "printed", [&cls](std::string& d) {
        if (!cls) cls = classify();
        bool ok = cls->rows.size() == 17 && cls->total == 373;
        std::set<int> matched;
        for (const ClassRow& r : cls->rows) {
            if (!r.matched_row) {
                ok = false;
                continue;
            }
            ok = ok && matched.insert(*r.matched_row).second;
            const CatalogRow& cat = table_catalog()[*r.matched_row - 1];
            ok = ok && r.orbit_size == cat.expected_size && r.alpha == cat.alpha;
        }
        ok = ok && cls->discrepancies.size() == 1 &&
             cls->discrepancies[0].find("row 1") != std::string::npos;
        d = "17 orbits match the 17 rows bijectively with the printed sizes; 373 covered";
        return ok;
    });

    run_entry(rep, "arithmetic-condition", "derived", [&cls](std::string& d) {
        if (!cls) cls = classify();
        bool ok = cls->rows.size() == 17;
        for (const ClassRow& r : cls->rows)
            ok = ok && r.condition3.satisfied && r.condition3.status == "vacuous";
        d = "the arithmetic condition is vacuous for every orbit; no rank-equality case "
            "triggers";
        return ok;
    });

    run_entry(rep, "kummer-ns-invariants", "printed", [](std::string& d) {
        const KummerNS& sy = build_sy();
        d = "rank 17, det 64, signature (1,16); E0/2 is not a class";
        return sy.lattice.rank() == 17 && determinant(sy.lattice) == 64 &&
               signature(sy.lattice) == Signature{1, 16} &&
               !sy_member(Q(1, 2) * sy.named.at("E0"));
    });

    run_entry(rep, "trope-incidence", "printed", [](std::string& d) {
        const KummerNS& sy = build_sy();
        std::vector<std::string> tropes, nodes;
        for (const auto& [name, v] : sy.named) {
            if (name[0] == 'C') tropes.push_back(name);
            if (name[0] == 'E') nodes.push_back(name);
        }
        bool ok = tropes.size() == 16 && nodes.size() == 16;
        std::map<std::string, int> node_count;
        for (const std::string& t : tropes) {
            const DivisorClass& c = sy.named.at(t);
            ok = ok && pairing(c, c) == -2 && sy_member(c);
            int meets = 0;
            for (const std::string& n : nodes)
                if (pairing(c, sy.named.at(n)) == 1) {
                    ++meets;
                    ++node_count[n];
                }
            ok = ok && meets == 6;
        }
        for (const std::string& n : nodes) ok = ok && node_count[n] == 6;
        d = "16 tropes of self-product -2; every trope meets 6 nodes and every node lies "
            "on 6 tropes";
        return ok;
    });

    run_entry(rep, "switch-involution", "printed", [](std::string& d) {
        const KummerNS& sy = build_sy();
        const DivisorClass shift = sy.named.at("L") - Q(2) * sy.named.at("E0");
        bool ok = true;
        for (const auto& [name, v] : sy.named) {
            DivisorClass image = alpha_action(v);
            ok = ok && alpha_action(image) == v;
            for (const auto& [other, w] : sy.named)
                ok = ok && pairing(image, alpha_action(w)) == pairing(v, w);
        }
        for (const auto& [name, v] : sy.named) {
            if (name[0] != 'C') continue;
            bool fixed = name == "C0" || name[1] == '1';
            DivisorClass expected = fixed ? v : v + shift;
            ok = ok && alpha_action(v) == expected;
        }
        d = "order-2 isometry; fixes C0 and C12..C16, moves the other ten tropes by L - 2*E0";
        return ok;
    });

    run_entry(rep, "even-eight-e", "printed", [&rep](std::string& d) {
        auto e = preset_eight("e");
        EvenEightReport good = is_even_eight(e);
        DivisorClass displayed = parse_divisor_expression(
            "17/2*L - 17/2*E0 - 5*E12 - 7/2*E13 - 1/2*E23 - 2*E24 - E25 - 1/2*E34 + 1/2*E35 "
            "- 3/2*E36 - 2*E45 - 4*E46 - 3*E56");
        auto printed = e;
        printed[4] = preset_classes().at("e5_printed");
        EvenEightReport bad = is_even_eight(printed);
        bool diverges = bad.norms_ok && !bad.orthogonal_ok && !bad.verdict;
        if (diverges)
            rep.discrepancies.push_back(
                {"even-eight-e5-sign",
                 "the printed fifth class adds the nodes E24, E25, E34, E36, E45; with plus "
                 "signs the eight is not pairwise orthogonal",
                 "e5 = " + divisor_string(preset_classes().at("e5"))});
        d = "even eight; half-sum equals the displayed class; the printed e5 variant fails "
            "orthogonality";
        return good.verdict && good.half_sum == displayed && diverges;
    });

    run_entry(rep, "even-eight-a", "printed", [&rep](std::string& d) {
        auto a = preset_eight("a");
        EvenEightReport r = is_even_eight(a);
        DivisorClass sum;
        for (const DivisorClass& c : a) sum = sum + c;
        const DivisorClass& displayed = preset_classes().at("a_sum_displayed");
        DivisorClass delta = sum - displayed;
        bool diverges =
            !(displayed == sum) &&
            delta == parse_divisor_expression("-2*E24 - 2*E25 - 2*E45 + 2*E46 - 2*E56");
        if (diverges)
            rep.discrepancies.push_back(
                {"a-half-sum-display",
                 "the displayed doubled half-sum of the a-classes misses the computed sum "
                 "by -2*E24 - 2*E25 - 2*E45 + 2*E46 - 2*E56",
                 "sum(a) = " + divisor_string(sum)});
        d = "even eight; the displayed doubled half-sum is off by a five-node block";
        return r.verdict && diverges && preset_classes().at("a_sum_corrected") == sum;
    });

    run_entry(rep, "even-eight-b", "printed", [](std::string& d) {
        auto b = preset_eight("b");
        EvenEightReport r = is_even_eight(b);
        DivisorClass sum;
        for (const DivisorClass& c : b) sum = sum + c;
        d = "even eight; the displayed doubled half-sum matches the computed sum exactly";
        return r.verdict && preset_classes().at("b_sum_displayed") == sum;
    });

    run_entry(rep, "fiber-component-sums", "printed", [&rep](std::string& d) {
        const auto& p = preset_classes();
        const DivisorClass &D = p.at("D"), &B = p.at("B");
        bool ok = pairing(D, D) == 0 && pairing(B, B) == 0 && sy_member(D) && sy_member(B);
        for (int i = 1; i <= 7; ++i) ok = ok && p.at("DF" + std::to_string(i)) == D;
        for (int i = 1; i <= 6; ++i) ok = ok && p.at("BF" + std::to_string(i)) == B;
        const KummerNS& sy = build_sy();
        bool diverges = !(p.at("BF5_printed") == B) &&
                        p.at("BF5_printed") - B == sy.named.at("E14") - sy.named.at("E34");
        if (diverges)
            rep.discrepancies.push_back(
                {"b-fiber-5-print",
                 "the printed fifth reducible fiber of the second pencil lists the node E14 "
                 "where the component sum needs E34",
                 "with E34 in place of E14 the components sum to the fiber class B"});
        d = "seven component sums equal D and six equal B; the printed fifth B-fiber "
            "needs a node swap";
        return ok && diverges;
    });

    run_entry(rep, "twist-lattice", "printed", [&twist](std::string& d) {
        if (!twist) twist = twist_check();
        d = "twisted Gram det -4; Nikulin span of the a-eight det 64; complement rank 9, "
            "det 4";
        return twist->twist_gram_det == -4 && twist->nikulin_sublattice.rank() == 8 &&
               determinant(twist->nikulin_sublattice) == 64 && twist->complement.rank() == 9 &&
               twist->complement_det == 4;
    });

    run_entry(rep, "twist-resolution", "printed", [&rep, &twist](std::string& d) {
        if (!twist) twist = twist_check();
        bool gram_ok = true;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                gram_ok = gram_ok && pairing(twist->resolution[i], twist->resolution[j]) ==
                                         Q(twist->twist_gram(i, j));
        bool diverges = twist->documented_solutions == 0 && twist->resolved;
        if (diverges) {
            std::string names;
            for (const std::string& n : twist->resolution_names) {
                if (!names.empty()) names += ", ";
                names += n;
            }
            rep.discrepancies.push_back(
                {"twist-generator-list",
                 "the displayed generator list for the twisted E8 names E14 twice and "
                 "yields no copy of the Gram matrix",
                 "e1..e8 = " + names});
        }
        d = "documented classes give 0 copies of the Gram; the widened search (pool 2111) "
            "resolves with a primitive eight";
        return diverges && gram_ok && twist->resolution_primitive &&
               twist->search_pool == 2111 && twist->extended_span_det == 16 &&
               twist->extended_span_index == 2;
    });

    run_entry(rep, "fibration-first-pencil", "printed", [](std::string& d) {
        AuditReport r = audit(make_config("6I2,I5*,I1", 17, true, 2, 0), Z(64));
        d = audit_detail(r);
        return r.all_passed;
    });

    run_entry(rep, "fibration-second-pencil", "printed", [](std::string& d) {
        AuditReport r = audit(make_config("4I2,I2*,I1*,I1", 17, true, 2, 0), Z(64));
        d = audit_detail(r);
        return r.all_passed;
    });

    run_entry(rep, "fibration-pullback", "printed", [](std::string& d) {
        AuditReport r = audit(make_config("4I1,I4*,I2*,I2", 17, false, std::nullopt,
                                          std::nullopt));
        d = audit_detail(r);
        return r.all_passed;
    });

    run_entry(rep, "fibration-printed-list", "printed", [&rep](std::string& d) {
        AuditReport printed = audit(make_config("I2,I10*,6I2", 17, true, 2, 0), Z(2));
        AuditReport corrected = audit(make_config("6I1,I2,I10*", 17, true, 2, 0), Z(2));
        bool chi_fails = !printed.all_passed && printed.chi_sum == 30;
        if (chi_fails && corrected.all_passed)
            rep.discrepancies.push_back(
                {"fiber-configuration-chi",
                 "the printed fiber list I2,I10*,6I2 has Euler numbers summing to 30, "
                 "not 24",
                 "the reading 6I1,I2,I10* passes every audit with Mordell-Weil "
                 "discriminant 2"});
        d = "printed list fails the Euler count (30); the reading 6I1,I2,I10* passes with "
            "discriminant 2";
        return chi_fails && corrected.all_passed && corrected.chi_sum == 24 &&
               corrected.mw_disc == Q(2);
    });

    run_entry(rep, "glue-embedding-survey", "derived", [](std::string& d) {
        Lattice s8 = e8_lattice(-2);
        FiniteQuadraticForm ds = discriminant_form(s8);
        std::vector<int> failed;
        for (const CatalogRow& row : table_catalog()) {
            const FiniteQuadraticForm& dt = catalog_computed_forms()[row.row - 1];
            FiniteQuadraticForm target = dt;
            for (int k = 0; k < 4 - row.alpha; ++k) target = direct_sum_forms(target, u2_form());
            bool found = false;
            std::size_t tried = 0;
            for (std::size_t want = 1; want <= 64 && !found; want *= 2) {
                auto maps = glue_maps(dt, ds, row.alpha, want);
                for (std::size_t k = tried; k < maps.size() && !found; ++k) {
                    Subgroup h = subgroup_from_generators(dt, maps[k].first);
                    Lattice m = glue(row.lattice, s8, h, maps[k].second);
                    FiniteQuadraticForm dm = discriminant_form(m);
                    if (!form_iso(dm, target).has_value()) continue;
                    EmbedDecision dec = nikulin_embedding_exists(signature(m), dm, {3, 19});
                    found = dec.embeds && determinant(m) == -512 &&
                            signature(m) == Signature{2, 11};
                }
                tried = maps.size();
                if (maps.size() < want) break;
            }
            if (!found) failed.push_back(row.row);
        }
        if (failed.empty()) {
            d = "all 17 glued lattices: det -512, discriminant form matches the row form "
                "plus u(2)^(4-alpha), embeds into (3,19)";
            return true;
        }
        d = "failing rows:";
        for (int r : failed) d += " " + std::to_string(r);
        return false;
    });

    std::vector<std::string> ids;
    for (const Discrepancy& d : rep.discrepancies) ids.push_back(d.id);
    rep.all_passed = ids == known_discrepancy_ids();
    for (const SelfTestEntry& e : rep.entries) rep.all_passed = rep.all_passed && e.passed;
    return rep;
}

}  // namespace k3lat
