// k3lat — command-line surface of the lattice workbench.
//
// Exit codes: 0 every check passed, 1 checks ran and found divergences from
// the printed source (each written to stderr as a DISCREPANCY line), 2
// usage or input error.  Output is byte-identical across runs; reports go
// to stdout, diagnostics and DISCREPANCY records to stderr.
#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "k3lat/classify.hpp"
#include "k3lat/discform.hpp"
#include "k3lat/f2.hpp"
#include "k3lat/fibration.hpp"
#include "k3lat/json_io.hpp"
#include "k3lat/kummer.hpp"
#include "k3lat/lattice.hpp"
#include "k3lat/selftest.hpp"

namespace {

using namespace k3lat;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Lattice lattice_from_file(const std::string& path) {
    return lattice_from_json(njson::parse(read_file(path)));
}

std::string orders_bracket(const std::vector<Z>& orders) {
    std::string out = "[";
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (i) out += ", ";
        out += to_string(orders[i]);
    }
    return out + "]";
}

std::string orders_plain(const std::vector<Z>& orders) {
    std::string out;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (i) out += " ";
        out += to_string(orders[i]);
    }
    return out;
}

std::string qvec_bracket(const QVec& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + "]";
}

void emit_discrepancy(const std::string& text) { std::cerr << "DISCREPANCY: " << text << "\n"; }

int run_classify(const std::string& format) {
    Classification c = classify();
    const auto& catalog = table_catalog();
    if (format == "json") {
        njson doc;
        doc["rows"] = classification_to_json(c);
        doc["total"] = c.total;
        std::cout << dump_json(doc);
    } else if (format == "csv") {
        std::cout << "row,name,size,alpha,disc_orders,condition3\n";
        for (const ClassRow& r : c.rows) {
            std::cout << (r.matched_row ? std::to_string(*r.matched_row) : "-") << ","
                      << (r.matched_row ? catalog[*r.matched_row - 1].name : "unmatched") << ","
                      << r.orbit_size << "," << r.alpha << "," << orders_plain(r.disc.orders)
                      << "," << r.condition3.status << "\n";
        }
        std::cout << "total=" << c.total << "\n";
    } else {
        std::cout << " row  size  alpha  orders              condition  name\n";
        for (const ClassRow& r : c.rows) {
            std::ostringstream line;
            line.width(4);
            line << (r.matched_row ? std::to_string(*r.matched_row) : "-");
            line.width(6);
            line << r.orbit_size;
            line.width(7);
            line << r.alpha;
            std::string orders = orders_bracket(r.disc.orders);
            orders.resize(std::max<std::size_t>(orders.size(), 18), ' ');
            line << "  " << orders << "  ";
            std::string cond = r.condition3.status;
            cond.resize(std::max<std::size_t>(cond.size(), 9), ' ');
            line << cond << "  "
                 << (r.matched_row ? catalog[*r.matched_row - 1].name : "unmatched");
            std::cout << line.str() << "\n";
        }
        std::cout << "total=" << c.total << "\n";
    }
    for (const std::string& note : c.discrepancies) emit_discrepancy(note);
    return c.discrepancies.empty() ? 0 : 1;
}

int run_orbits(const std::string& format) {
    const std::vector<F2Orbit>& orbits = subspace_orbits();
    if (format == "json") {
        std::cout << dump_json(orbits_to_json(orbits));
        return 0;
    }
    int index = 0;
    for (const F2Orbit& o : orbits) {
        std::ostringstream line;
        line << "orbit ";
        line.width(2);
        line << ++index << ": dim " << o.dim << " alpha " << o.alpha << " size ";
        line.width(2);
        line << o.size << " rep {";
        for (std::size_t i = 0; i < o.rep.basis.size(); ++i) {
            if (i) line << ", ";
            line << f2_vec_string(o.rep.basis[i]);
        }
        line << "}";
        std::cout << line.str() << "\n";
    }
    return 0;
}

int run_discform(const std::string& path, const std::string& format) {
    Lattice l = lattice_from_file(path);
    FiniteQuadraticForm f = discriminant_form(l);
    if (format == "json") {
        std::cout << dump_json(form_to_json(f));
        return 0;
    }
    std::cout << "orders: " << orders_bracket(f.orders) << "\n";
    std::cout << "q: " << qvec_bracket(f.q_values) << "\n";
    std::cout << "b:\n";
    for (std::size_t i = 0; i < f.b_matrix.rows; ++i) {
        QVec row(f.b_matrix.cols);
        for (std::size_t j = 0; j < f.b_matrix.cols; ++j) row[j] = f.b_matrix(i, j);
        std::cout << "  " << qvec_bracket(row) << "\n";
    }
    return 0;
}

int run_embed_check(const std::string& path, const std::vector<int>& target,
                    const std::string& format) {
    if (target.size() != 2 || target[0] < 0 || target[1] < 0)
        throw std::invalid_argument("--target needs two nonnegative integers p,m");
    Lattice l = lattice_from_file(path);
    Signature sig = signature(l);
    Signature tgt{target[0], target[1]};
    EmbedDecision d = nikulin_embedding_exists(sig, discriminant_form(l), tgt);
    if (format == "json") {
        njson doc;
        doc["signature"] = njson::array({sig.plus, sig.minus});
        doc["target"] = njson::array({tgt.plus, tgt.minus});
        njson body = embed_to_json(d);
        doc["embeds"] = body["embeds"];
        doc["conditions"] = body["conditions"];
        std::cout << dump_json(doc);
        return 0;
    }
    std::cout << "signature: (" << sig.plus << "," << sig.minus << ")\n";
    std::cout << "target: (" << tgt.plus << "," << tgt.minus << ")\n";
    for (const EmbedCondition& c : d.conditions) {
        std::cout << "condition " << c.id << ": ";
        if (!c.triggered)
            std::cout << "untriggered\n";
        else
            std::cout << (c.holds ? "triggered, holds" : "triggered, fails") << "\n";
    }
    std::cout << "embeds: " << (d.embeds ? "yes" : "no") << "\n";
    return 0;
}

int run_even_eight(const std::string& which, const std::string& format) {
    const auto& presets = preset_classes();
    std::array<DivisorClass, 8> eight;
    std::vector<std::string> names;
    for (int i = 0; i < 8; ++i) {
        names.push_back(which + std::to_string(i + 1));
        eight[i] = presets.at(names.back());
    }
    EvenEightReport r = is_even_eight(eight);
    if (format == "json") {
        njson doc;
        njson classes = njson::array();
        for (int i = 0; i < 8; ++i) {
            njson entry;
            entry["name"] = names[i];
            entry["class"] = divisor_string(eight[i]);
            classes.push_back(entry);
        }
        doc["classes"] = classes;
        doc["norms_ok"] = r.norms_ok;
        doc["orthogonal_ok"] = r.orthogonal_ok;
        doc["half_sum_in_lattice"] = r.half_sum_in_lattice;
        doc["verdict"] = r.verdict;
        doc["half_sum"] = divisor_string(r.half_sum);
        std::cout << dump_json(doc);
    } else {
        for (int i = 0; i < 8; ++i)
            std::cout << names[i] << " = " << divisor_string(eight[i]) << "\n";
        std::cout << "norms: " << (r.norms_ok ? "all self-products -2" : "FAIL") << "\n";
        std::cout << "orthogonal: " << (r.orthogonal_ok ? "yes" : "no") << "\n";
        std::cout << "half-sum integral: " << (r.half_sum_in_lattice ? "yes" : "no") << "\n";
        std::cout << "verdict: " << (r.verdict ? "even eight" : "not an even eight") << "\n";
        std::cout << "half-sum = " << divisor_string(r.half_sum) << "\n";
    }

    int divergences = 0;
    if (which == "e") {
        auto printed = eight;
        printed[4] = presets.at("e5_printed");
        EvenEightReport bad = is_even_eight(printed);
        if (bad.norms_ok && !bad.orthogonal_ok) {
            emit_discrepancy(
                "even-eight-e5-sign: the printed fifth class adds the nodes E24, E25, E34, "
                "E36, E45; with plus signs the eight is not pairwise orthogonal "
                "(resolution: e5 = " +
                divisor_string(presets.at("e5")) + ")");
            ++divergences;
        }
    }
    if (which == "a") {
        DivisorClass sum;
        for (const DivisorClass& c : eight) sum = sum + c;
        if (!(presets.at("a_sum_displayed") == sum)) {
            emit_discrepancy(
                "a-half-sum-display: the displayed doubled half-sum of the a-classes misses "
                "the computed sum by -2*E24 - 2*E25 - 2*E45 + 2*E46 - 2*E56 "
                "(resolution: sum(a) = " +
                divisor_string(sum) + ")");
            ++divergences;
        }
    }
    return divergences == 0 ? 0 : 1;
}

int run_divisor(const std::string& expr, const std::string& format) {
    DivisorClass v = parse_divisor_expression(expr);
    Q self = pairing(v, v);
    bool member = sy_member(v);
    if (format == "json") {
        njson doc;
        doc["class"] = divisor_string(v);
        njson coords = njson::array();
        for (std::size_t i = 0; i < v.coords.size(); ++i) coords.push_back(q_to_json(v.coords[i]));
        doc["coords"] = coords;
        doc["self_product"] = q_to_json(self);
        doc["member"] = member;
        std::cout << dump_json(doc);
        return 0;
    }
    std::cout << "class: " << divisor_string(v) << "\n";
    std::cout << "self-product: " << to_string(self) << "\n";
    std::cout << "member: " << (member ? "yes" : "no") << "\n";
    return 0;
}

int run_fibration(const FiberConfiguration& config, std::optional<Z> expected_disc,
                  const std::string& format) {
    AuditReport r = audit(config, expected_disc);
    if (format == "json") {
        njson doc;
        doc["fibers"] = fiber_string(r.config.fibers);
        doc["chi_sum"] = r.chi_sum;
        doc["mw_rank"] = r.mw_rank ? njson(*r.mw_rank) : njson();
        doc["mw_disc"] = r.mw_disc ? q_to_json(*r.mw_disc) : njson();
        njson items = njson::array();
        for (const AuditItem& item : r.items) {
            njson entry;
            entry["label"] = item.label;
            entry["passed"] = item.passed;
            entry["detail"] = item.detail;
            items.push_back(entry);
        }
        doc["items"] = items;
        doc["all_passed"] = r.all_passed;
        std::cout << dump_json(doc);
    } else {
        std::cout << "fibers: " << fiber_string(r.config.fibers) << "\n";
        for (const AuditItem& item : r.items)
            std::cout << (item.passed ? "pass " : "FAIL ") << item.detail << "\n";
        std::cout << "verdict: " << (r.all_passed ? "pass" : "fail") << "\n";
    }
    for (const AuditItem& item : r.items)
        if (!item.passed) emit_discrepancy(item.detail);
    return r.all_passed ? 0 : 1;
}

int run_selftest_cmd(const std::string& format) {
    SelfTestReport r = run_selftest();
    std::size_t passed = 0;
    for (const SelfTestEntry& e : r.entries) passed += e.passed ? 1 : 0;
    std::size_t known = 0;
    for (const Discrepancy& d : r.discrepancies)
        for (const std::string& id : known_discrepancy_ids())
            if (d.id == id) {
                ++known;
                break;
            }
    if (format == "json") {
        njson doc;
        njson entries = njson::array();
        for (const SelfTestEntry& e : r.entries) {
            njson entry;
            entry["name"] = e.name;
            entry["provenance"] = e.provenance;
            entry["passed"] = e.passed;
            entry["detail"] = e.detail;
            entries.push_back(entry);
        }
        doc["entries"] = entries;
        njson divergences = njson::array();
        for (const Discrepancy& d : r.discrepancies) {
            njson entry;
            entry["id"] = d.id;
            entry["summary"] = d.summary;
            entry["resolution"] = d.resolution;
            divergences.push_back(entry);
        }
        doc["discrepancies"] = divergences;
        doc["all_passed"] = r.all_passed;
        std::cout << dump_json(doc);
    } else {
        for (const SelfTestEntry& e : r.entries) {
            std::ostringstream line;
            line << (e.passed ? "pass  " : "FAIL  ");
            std::string name = e.name;
            name.resize(std::max<std::size_t>(name.size(), 26), ' ');
            std::string tag = e.provenance;
            tag.resize(std::max<std::size_t>(tag.size(), 8), ' ');
            line << name << "  " << tag << "  " << e.detail;
            std::cout << line.str() << "\n";
        }
        std::cout << "discrepancies:\n";
        for (const Discrepancy& d : r.discrepancies) {
            std::cout << "  " << d.id << ": " << d.summary << "\n";
            if (!d.resolution.empty()) std::cout << "    resolution: " << d.resolution << "\n";
        }
        std::cout << "selftest: " << passed << "/" << r.entries.size()
                  << " checks passed; divergence records: " << known << " of "
                  << known_discrepancy_ids().size() << " expected\n";
    }
    return r.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic workbench for the rank-17 double-cover lattice census"};
    app.require_subcommand(1);

    int rc = 0;

    auto add_format = [](CLI::App* cmd, std::string& fmt, std::vector<std::string> allowed) {
        cmd->add_option("--format", fmt, "output format")
            ->check(CLI::IsMember(allowed))
            ->capture_default_str();
    };

    auto* classify_cmd =
        app.add_subcommand("classify", "enumerate the 17 orbit classes and match the catalog");
    static std::string classify_fmt = "text";
    add_format(classify_cmd, classify_fmt, {"text", "json", "csv"});
    classify_cmd->callback([&rc]() { rc = run_classify(classify_fmt); });

    auto* orbits_cmd = app.add_subcommand("orbits", "list the subspace orbits of F_2^5");
    static std::string orbits_fmt = "text";
    add_format(orbits_cmd, orbits_fmt, {"text", "json"});
    orbits_cmd->callback([&rc]() { rc = run_orbits(orbits_fmt); });

    auto* discform_cmd =
        app.add_subcommand("discform", "discriminant form of a lattice given as JSON");
    static std::string discform_path, discform_fmt = "text";
    discform_cmd->add_option("gram", discform_path, "path to a lattice JSON document")
        ->required();
    add_format(discform_cmd, discform_fmt, {"text", "json"});
    discform_cmd->callback([&rc]() { rc = run_discform(discform_path, discform_fmt); });

    auto* embed_cmd = app.add_subcommand(
        "embed-check", "primitive-embedding criterion into an even unimodular target");
    static std::string embed_path, embed_fmt = "text";
    static std::vector<int> embed_target = {3, 19};
    embed_cmd->add_option("gram", embed_path, "path to a lattice JSON document")->required();
    embed_cmd->add_option("--target", embed_target, "target signature p,m")
        ->delimiter(',')
        ->capture_default_str();
    add_format(embed_cmd, embed_fmt, {"text", "json"});
    embed_cmd->callback(
        [&rc]() { rc = run_embed_check(embed_path, embed_target, embed_fmt); });

    auto* eight_cmd = app.add_subcommand("even-eight", "even-eight checks on preset classes");
    eight_cmd->require_subcommand(1);
    auto* verify_cmd = eight_cmd->add_subcommand("verify", "verify one of the preset eights");
    static std::string eight_which, eight_fmt = "text";
    verify_cmd->add_option("which", eight_which, "one of e, a, b")
        ->required()
        ->check(CLI::IsMember({"e", "a", "b"}));
    add_format(verify_cmd, eight_fmt, {"text", "json"});
    verify_cmd->callback([&rc]() { rc = run_even_eight(eight_which, eight_fmt); });

    auto* divisor_cmd =
        app.add_subcommand("divisor", "divisor-class arithmetic on the rank-17 lattice");
    divisor_cmd->require_subcommand(1);
    auto* eval_cmd = divisor_cmd->add_subcommand("eval", "evaluate a divisor expression");
    static std::string divisor_expr, divisor_fmt = "text";
    eval_cmd->add_option("expression", divisor_expr, "linear expression in the named classes")
        ->required();
    add_format(eval_cmd, divisor_fmt, {"text", "json"});
    eval_cmd->callback([&rc]() { rc = run_divisor(divisor_expr, divisor_fmt); });

    auto* fibration_cmd = app.add_subcommand("fibration", "elliptic-fibration bookkeeping");
    fibration_cmd->require_subcommand(1);
    auto* audit_cmd = fibration_cmd->add_subcommand("audit", "audit a fiber configuration");
    static std::string fibers, fib_fmt = "text";
    static int rho = 0, mw_order = 0, mw_rank = 0;
    static long disc = 0;
    audit_cmd->add_option("--fibers", fibers, "fiber list, e.g. \"6I2,I5*,I1\"")->required();
    auto* rho_opt = audit_cmd->add_option("--rho", rho, "Neron-Severi rank");
    auto* section_flag = audit_cmd->add_flag("--section", "the fibration has a section");
    auto* order_opt = audit_cmd->add_option("--mw-order", mw_order, "Mordell-Weil torsion order");
    auto* rank_opt = audit_cmd->add_option("--mw-rank", mw_rank, "expected Mordell-Weil rank");
    auto* disc_opt = audit_cmd->add_option("--disc", disc, "expected discriminant");
    add_format(audit_cmd, fib_fmt, {"text", "json"});
    audit_cmd->callback([&rc, rho_opt, section_flag, order_opt, rank_opt, disc_opt]() {
        FiberConfiguration config;
        config.fibers = parse_fiber_string(fibers);
        if (rho_opt->count()) config.ns_rank = rho;
        config.has_section = section_flag->count() > 0;
        if (order_opt->count()) config.mw_order = mw_order;
        if (rank_opt->count()) config.mw_rank_expected = mw_rank;
        std::optional<Z> expected;
        if (disc_opt->count()) expected = Z(disc);
        rc = run_fibration(config, expected, fib_fmt);
    });

    auto* selftest_cmd = app.add_subcommand("selftest", "run every golden check");
    static std::string selftest_fmt = "text";
    add_format(selftest_cmd, selftest_fmt, {"text", "json"});
    selftest_cmd->callback([&rc]() { rc = run_selftest_cmd(selftest_fmt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
