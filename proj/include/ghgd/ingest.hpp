#ifndef GHGD_INGEST_HPP
#define GHGD_INGEST_HPP

// Element-list ingestion for observed overlap counts.
//
// One identifier per line; surrounding whitespace and a trailing CR are
// stripped, blank lines and lines starting with '#' are skipped, and
// repeated identifiers within a file are counted once.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ghgd/error.hpp"
#include "ghgd/problem.hpp"

namespace ghgd {

/// Universe given either as a size or as an explicit identifier list.
struct UniverseSpec {
    std::optional<std::uint64_t> size;
    std::optional<std::string> path;
};

struct IngestOptions {
    bool fold_case = false;
};

struct ElementLists {
    std::vector<std::string> names;                // source of each list
    std::vector<std::vector<std::string>> lists;   // distinct identifiers, first-seen order
    std::uint64_t universe_size = 0;
    std::vector<std::string> warnings;

    std::vector<std::uint64_t> sizes() const {
        std::vector<std::uint64_t> m;
        for (const auto& l : lists) m.push_back(l.size());
        return m;
    }
};

namespace detail {

inline std::string trim(const std::string& line) {
    auto first = std::find_if_not(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
    auto last = std::find_if_not(line.rbegin(), line.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return first < last ? std::string(first, last) : std::string();
}

inline std::string fold(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

/// Distinct identifiers of one file, in first-seen order.
inline std::vector<std::string> read_identifiers(const std::string& path, const IngestOptions& options,
                                                 std::vector<std::string>& warnings) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot read input file '" + path + "'");
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string id = trim(line);
        if (id.empty() || id.front() == '#') continue;
        if (options.fold_case) id = fold(std::move(id));
        if (!seen.insert(id).second) {
            warnings.push_back(path + ":" + std::to_string(line_no) + ": duplicate identifier '" + id +
                               "' ignored");
            continue;
        }
        out.push_back(std::move(id));
    }
    return out;
}

}  // namespace detail

inline ElementLists ingest(const std::vector<std::string>& paths, const UniverseSpec& universe,
                           const IngestOptions& options = {}) {
    if (paths.empty()) throw domain_error("at least one input list is required");
    if (universe.size.has_value() == universe.path.has_value()) {
        throw domain_error("give the universe either as a size or as an identifier file");
    }
    ElementLists out;
    for (const auto& p : paths) {
        out.names.push_back(p);
        out.lists.push_back(detail::read_identifiers(p, options, out.warnings));
    }

    if (universe.path) {
        std::vector<std::string> ignored;
        const auto ids = detail::read_identifiers(*universe.path, options, ignored);
        const std::unordered_set<std::string> members(ids.begin(), ids.end());
        std::set<std::string> offenders;
        for (const auto& list : out.lists) {
            for (const auto& id : list) {
                if (!members.count(id)) offenders.insert(id);
            }
        }
        if (!offenders.empty()) {
            std::string msg = std::to_string(offenders.size()) + " identifier(s) missing from the universe:";
            std::size_t shown = 0;
            for (const auto& id : offenders) {
                if (shown++ == 20) {
                    msg += " ...";
                    break;
                }
                msg += " " + id;
            }
            throw domain_error(msg);
        }
        out.universe_size = members.size();
    } else {
        out.universe_size = *universe.size;
    }

    for (std::size_t i = 0; i < out.lists.size(); ++i) {
        if (out.lists[i].size() > out.universe_size) {
            throw domain_error("list '" + out.names[i] + "' has " + std::to_string(out.lists[i].size()) +
                               " identifiers, more than the universe size " +
                               std::to_string(out.universe_size));
        }
    }
    return out;
}

/// Histogram over LO = 0..T of how many lists contain each identifier.
inline LOHistogram observed_lo_counts(const ElementLists& lists) {
    std::unordered_map<std::string, std::uint32_t> level;
    for (const auto& list : lists.lists) {
        for (const auto& id : list) ++level[id];
    }
    if (level.size() > lists.universe_size) {
        throw domain_error(std::to_string(level.size()) + " distinct identifiers exceed the universe size " +
                           std::to_string(lists.universe_size));
    }
    LOHistogram hist{std::vector<std::uint64_t>(lists.lists.size() + 1, 0)};
    for (const auto& [id, lo] : level) ++hist.counts[lo];
    hist.counts[0] = lists.universe_size - level.size();
    return hist;
}

}  // namespace ghgd

#endif  // GHGD_INGEST_HPP
