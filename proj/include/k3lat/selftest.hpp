// Aggregated golden checks across every module, each tagged with its
// provenance: "printed" when the expected value transcribes the reference
// table or a displayed formula, "derived" when it comes from an independent
// oracle.  Places where the printed source and direct computation disagree
// are emitted as divergence records; the set of those records is pinned.
#pragma once

#include <string>
#include <vector>

namespace k3lat {

struct SelfTestEntry {
    std::string name;
    std::string provenance;  // "printed" or "derived"
    bool passed = false;
    std::string detail;
};

// One place where the printed source and direct computation disagree.
struct Discrepancy {
    std::string id;
    std::string summary;
    std::string resolution;  // empty when no canonical replacement applies
};

struct SelfTestReport {
    std::vector<SelfTestEntry> entries;
    std::vector<Discrepancy> discrepancies;
    // Every entry passed and the divergence records are exactly the pinned
    // set, in order.
    bool all_passed = false;
};

// The pinned divergence identifiers, in report order.
const std::vector<std::string>& known_discrepancy_ids();

// Runs every check.  Individual failures (including exceptions escaping an
// entry body) become failed entries, never a throw from here.
SelfTestReport run_selftest();

}  // namespace k3lat
