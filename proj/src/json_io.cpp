#include "k3lat/json_io.hpp"

#include <stdexcept>

namespace k3lat {

namespace {

Z z_from_json(const njson& value) {
    Q q = q_from_json(value);
    if (q.get_den() != 1) throw std::invalid_argument("expected an integer, got " + to_string(q));
    return q.get_num();
}

}  // namespace

std::string dump_json(const njson& doc) { return doc.dump(2) + "\n"; }

njson q_to_json(const Q& value) { return to_string(value); }

Q q_from_json(const njson& value) {
    if (value.is_number_integer()) return Q(static_cast<long>(value.get<std::int64_t>()));
    if (value.is_string()) return q_from_string(value.get<std::string>());
    throw std::invalid_argument("expected an integer or a \"p/q\" string");
}

njson zmat_to_json(const ZMat& m) {
    njson rows = njson::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        njson row = njson::array();
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (!m(i, j).fits_slong_p()) throw TooLarge("matrix entry exceeds JSON range");
            row.push_back(m(i, j).get_si());
        }
        rows.push_back(row);
    }
    return rows;
}

njson qmat_to_json(const QMat& m) {
    njson rows = njson::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        njson row = njson::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(q_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

QMat qmat_from_json(const njson& doc) {
    if (!doc.is_array() || doc.empty()) throw std::invalid_argument("expected a matrix");
    std::size_t cols = 0;
    for (const auto& row : doc) {
        if (!row.is_array()) throw std::invalid_argument("expected a matrix of rows");
        if (cols == 0) cols = row.size();
        if (row.size() != cols || cols == 0)
            throw std::invalid_argument("matrix rows must share a positive length");
    }
    QMat m(doc.size(), cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = q_from_json(doc[i][j]);
    return m;
}

Lattice lattice_from_json(const njson& doc) {
    if (!doc.is_object()) throw std::invalid_argument("expected a lattice object");
    if (!doc.contains("gram")) throw std::invalid_argument("lattice document needs \"gram\"");
    QMat gram = qmat_from_json(doc.at("gram"));
    if (gram.rows != gram.cols) throw std::invalid_argument("gram must be square");
    if (doc.contains("dim") && doc.at("dim").get<std::size_t>() != gram.rows)
        throw std::invalid_argument("dim disagrees with the gram size");

    if (doc.contains("generators")) {
        QuadSpace space = QuadSpace::from_gram(gram);
        QMat gens = qmat_from_json(doc.at("generators"));
        if (gens.cols != space.dim)
            throw std::invalid_argument("generator rows must have dim entries");
        return lattice_from_generators(space, gens);
    }
    auto zgram = to_z(gram);
    if (!zgram) throw std::invalid_argument("a lattice given only by its gram must be integral");
    return lattice_from_gram(*zgram);
}

njson lattice_to_json(const Lattice& l) {
    njson doc;
    doc["dim"] = l.space.dim;
    doc["gram"] = qmat_to_json(l.space.gram);
    doc["generators"] = qmat_to_json(l.basis);
    doc["rank"] = l.rank();
    doc["det"] = to_string(determinant(l));
    Signature sig = signature(l);
    doc["signature"] = njson::array({sig.plus, sig.minus});
    return doc;
}

njson form_to_json(const FiniteQuadraticForm& f) {
    njson doc;
    njson orders = njson::array();
    for (const Z& d : f.orders) {
        if (!d.fits_slong_p()) throw TooLarge("group order exceeds JSON range");
        orders.push_back(d.get_si());
    }
    doc["orders"] = orders;
    njson q = njson::array();
    for (const Q& v : f.q_values) q.push_back(q_to_json(v));
    doc["q"] = q;
    doc["b"] = qmat_to_json(f.b_matrix);
    return doc;
}

njson embed_to_json(const EmbedDecision& d) {
    njson doc;
    doc["embeds"] = d.embeds;
    njson conditions = njson::array();
    for (const EmbedCondition& c : d.conditions) {
        njson entry;
        entry["id"] = c.id;
        entry["triggered"] = c.triggered;
        entry["holds"] = c.holds;
        conditions.push_back(entry);
    }
    doc["conditions"] = conditions;
    return doc;
}

njson orbits_to_json(const std::vector<F2Orbit>& orbits) {
    njson doc = njson::array();
    for (const F2Orbit& orbit : orbits) {
        njson entry;
        njson rep = njson::array();
        for (F2Vec v : orbit.rep.basis) rep.push_back(f2_vec_string(v));
        entry["rep"] = rep;
        entry["dim"] = orbit.dim;
        entry["size"] = orbit.size;
        entry["alpha"] = orbit.alpha;
        doc.push_back(entry);
    }
    return doc;
}

njson classification_to_json(const Classification& c) {
    const auto& catalog = table_catalog();
    njson doc = njson::array();
    for (const ClassRow& row : c.rows) {
        njson entry;
        entry["row"] = row.matched_row ? njson(*row.matched_row) : njson();
        entry["name"] = row.matched_row ? njson(catalog[*row.matched_row - 1].name) : njson();
        entry["size"] = row.orbit_size;
        entry["alpha"] = row.alpha;
        njson orders = njson::array();
        for (const Z& d : row.disc.orders) orders.push_back(d.get_si());
        entry["disc_orders"] = orders;
        entry["condition3"] = row.condition3.status;
        doc.push_back(entry);
    }
    return doc;
}

}  // namespace k3lat
