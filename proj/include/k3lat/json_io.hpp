// JSON serialization for the CLI: lattices, discriminant forms, embedding
// verdicts, orbit and classification tables.  Rationals travel as "p/q"
// strings; structural integers (dimensions, counts, orders) as numbers.
// Key order is fixed, so parse + dump round-trips byte for byte.
#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "k3lat/classify.hpp"
#include "k3lat/discform.hpp"
#include "k3lat/f2.hpp"
#include "k3lat/lattice.hpp"

namespace k3lat {

using njson = nlohmann::ordered_json;

// Canonical rendering used everywhere: two-space indent, trailing newline.
std::string dump_json(const njson& doc);

njson q_to_json(const Q& value);  // always a string, "p" or "p/q"
// Accepts a JSON integer or a "p/q" string.  Throws std::invalid_argument.
Q q_from_json(const njson& value);

njson zmat_to_json(const ZMat& m);
njson qmat_to_json(const QMat& m);
QMat qmat_from_json(const njson& doc);  // entries integers or "p/q" strings

// {"dim": n, "gram": [[...]], "generators": [[...]] optional}.  Without
// generators the gram itself must be an integral even matrix.
Lattice lattice_from_json(const njson& doc);
// Mirrors the input fields (generators = the canonical basis) and appends
// "rank", "det" (string), "signature" ([plus, minus]).
njson lattice_to_json(const Lattice& l);

// {"orders": [...], "q": ["p/q", ...], "b": [["p/q", ...], ...]}.
njson form_to_json(const FiniteQuadraticForm& f);

// {"embeds": bool, "conditions": [{"id", "triggered", "holds"} x4]}.
njson embed_to_json(const EmbedDecision& d);

// [{"rep": ["01001", ...], "dim": d, "size": n, "alpha": a}, ...].
njson orbits_to_json(const std::vector<F2Orbit>& orbits);

// [{"row","name","size","alpha","disc_orders","condition3"}, ...], the
// seventeen matched rows in table order.
njson classification_to_json(const Classification& c);

}  // namespace k3lat
