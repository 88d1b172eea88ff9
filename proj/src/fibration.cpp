#include "k3lat/fibration.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace k3lat {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Groups consecutive equal tags, keeping order.
std::vector<std::pair<KodairaType, int>> grouped(const std::vector<KodairaType>& fibers) {
    std::vector<std::pair<KodairaType, int>> out;
    for (const auto& f : fibers) {
        if (!out.empty() && out.back().first == f)
            ++out.back().second;
        else
            out.emplace_back(f, 1);
    }
    return out;
}

}  // namespace

KodairaType kodaira_type(const std::string& tag) {
    if (tag == "II") return {tag, 2, 1, 1};
    if (tag == "III") return {tag, 3, 2, 2};
    if (tag == "IV") return {tag, 4, 3, 3};
    if (tag == "IV*") return {tag, 8, 7, 3};
    if (tag == "III*") return {tag, 9, 8, 2};
    if (tag == "II*") return {tag, 10, 9, 1};
    if (tag.size() >= 2 && tag[0] == 'I' &&
        std::isdigit(static_cast<unsigned char>(tag[1]))) {
        bool star = tag.back() == '*';
        std::string digits = tag.substr(1, tag.size() - 1 - (star ? 1 : 0));
        if (all_digits(digits)) {
            int n = std::stoi(digits);
            if (star && n >= 0) return {tag, n + 6, n + 5, 4};
            if (!star && n >= 1) return {tag, n, n, n};
        }
    }
    throw std::invalid_argument("unknown Kodaira type: " + tag);
}

std::vector<KodairaType> parse_fiber_string(const std::string& text) {
    std::vector<KodairaType> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    bool first = true;
    for (;;) {
        skip();
        if (i == n) {
            if (first) throw std::invalid_argument("empty fiber list");
            break;
        }
        if (!first) {
            if (text[i] != ',') throw std::invalid_argument("expected ',' in fiber list");
            ++i;
            skip();
        }
        int count = 1;
        if (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t start = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            count = std::stoi(text.substr(start, i - start));
            if (count < 1) throw std::invalid_argument("fiber count must be positive");
        }
        std::size_t start = i;
        while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '*'))
            ++i;
        if (i == start) throw std::invalid_argument("expected a fiber type");
        KodairaType t = kodaira_type(text.substr(start, i - start));
        for (int c = 0; c < count; ++c) out.push_back(t);
        first = false;
    }
    return out;
}

std::string fiber_string(const std::vector<KodairaType>& fibers) {
    std::string s;
    for (const auto& [type, count] : grouped(fibers)) {
        if (!s.empty()) s += ",";
        if (count > 1) s += std::to_string(count);
        s += type.tag;
    }
    return s;
}

int shioda_tate_rank(const FiberConfiguration& config) {
    if (!config.has_section) throw NoSection("Shioda-Tate rank needs a declared section");
    int drop = 0;
    for (const auto& f : config.fibers) drop += f.m - 1;
    return config.ns_rank - 2 - drop;
}

AuditReport audit(const FiberConfiguration& config, std::optional<Z> expected_disc) {
    AuditReport rep;
    rep.config = config;

    {
        AuditItem item;
        item.label = "chi";
        std::string terms;
        for (const auto& [type, count] : grouped(config.fibers)) {
            rep.chi_sum += count * type.chi;
            if (!terms.empty()) terms += "+";
            terms += std::to_string(count * type.chi);
        }
        if (terms.empty()) terms = "0";
        item.passed = rep.chi_sum == 24;
        item.detail = "chi: " + terms + " = " + std::to_string(rep.chi_sum) + ", expected 24";
        rep.items.push_back(item);
    }

    if (config.has_section) {
        AuditItem item;
        item.label = "mw-rank";
        int drop = 0;
        for (const auto& f : config.fibers) drop += f.m - 1;
        int rank = config.ns_rank - 2 - drop;
        rep.mw_rank = rank;
        item.passed = rank >= 0;
        item.detail = "rank: " + std::to_string(config.ns_rank) + " - 2 - " +
                      std::to_string(drop) + " = " + std::to_string(rank);
        if (config.mw_rank_expected) {
            item.passed = item.passed && rank == *config.mw_rank_expected;
            item.detail += ", expected " + std::to_string(*config.mw_rank_expected);
        }
        rep.items.push_back(item);

        if (rank == 0 && config.mw_order) {
            AuditItem disc;
            disc.label = "mw-disc";
            Z prod = 1;
            for (const auto& f : config.fibers) prod *= f.s;
            Z nn = Z(*config.mw_order) * Z(*config.mw_order);
            Q value = Q(prod) / Q(nn);
            value.canonicalize();
            rep.mw_disc = value;
            disc.passed = value.get_den() == 1;
            disc.detail = "disc: " + to_string(Q(prod)) + "/" +
                          std::to_string(*config.mw_order) + "^2 = " + to_string(value);
            if (expected_disc) {
                disc.passed = disc.passed && value == Q(*expected_disc);
                disc.detail += ", expected " + to_string(*expected_disc);
            }
            rep.items.push_back(disc);
        }
    }

    rep.all_passed = true;
    for (const auto& item : rep.items) rep.all_passed = rep.all_passed && item.passed;
    return rep;
}

}  // namespace k3lat
