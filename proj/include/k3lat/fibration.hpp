// Kodaira fiber-type bookkeeping for elliptic surfaces: Euler-number
// accounting, the Shioda-Tate rank formula and the Mordell-Weil
// discriminant check.  Pure arithmetic; no geometry is constructed.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k3lat/errors.hpp"
#include "k3lat/zmat.hpp"

namespace k3lat {

// One singular fiber.  chi is the Euler number, m the number of
// irreducible components, s the number of simple components.
struct KodairaType {
    std::string tag;  // "I1", "I5*", "II", "IV*", ...
    int chi = 0;
    int m = 0;
    int s = 0;

    bool operator==(const KodairaType&) const = default;
};

// Table lookup by tag.  I_n (n >= 1) and I*_n (n >= 0) are derived from n:
// (n,n,n) and (n+6,n+5,4); the additive types are fixed constants.
// Throws std::invalid_argument for anything else.
KodairaType kodaira_type(const std::string& tag);

// "6I2,I5*,I1" -> six I2 entries, one I5*, one I1.  A count prefix repeats
// the type; order is preserved.
std::vector<KodairaType> parse_fiber_string(const std::string& text);

// Canonical rendering: consecutive equal types grouped with a count prefix.
std::string fiber_string(const std::vector<KodairaType>& fibers);

struct FiberConfiguration {
    std::vector<KodairaType> fibers;
    int ns_rank = 0;
    bool has_section = false;
    std::optional<int> mw_order;          // torsion order n
    std::optional<int> mw_rank_expected;
};

// rank(S_X) - 2 - sum (m_i - 1).  Throws NoSection when the configuration
// has none; a negative value is legal output (the audit flags it).
int shioda_tate_rank(const FiberConfiguration& config);

struct AuditItem {
    std::string label;   // "chi", "mw-rank", "mw-disc"
    bool passed = false;
    std::string detail;  // the arithmetic, with expectations when given
};

struct AuditReport {
    FiberConfiguration config;
    int chi_sum = 0;
    std::optional<int> mw_rank;  // present when a section was declared
    std::optional<Q> mw_disc;    // product s_i / n^2, when applicable
    std::vector<AuditItem> items;
    bool all_passed = false;
};

// Consistency audit: (a) sum of Euler numbers against 24, (b) Shioda-Tate
// rank when a section is declared (negative rank fails, an expected rank is
// compared when given), (c) the discriminant formula when the rank is zero
// and a torsion order is given.  Failures are report data, never throws.
AuditReport audit(const FiberConfiguration& config,
                  std::optional<Z> expected_disc = std::nullopt);

}  // namespace k3lat
