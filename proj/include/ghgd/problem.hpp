#ifndef GHGD_PROBLEM_HPP
#define GHGD_PROBLEM_HPP

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "ghgd/error.hpp"
#include "ghgd/exact.hpp"

namespace ghgd {

/// Universe size N and the T subset sizes drawn from it.
class ProblemSpec {
public:
    ProblemSpec(std::uint64_t n, SubsetSizes sizes) : n_(n), sizes_(std::move(sizes)) {
        if (sizes_.t_count() == 0) throw domain_error("at least one subset size is required");
        for (std::size_t i = 0; i < sizes_.t_count(); ++i) {
            if (sizes_[i] > n_) {
                throw domain_error("subset size M[" + std::to_string(i) + "] = " +
                                   std::to_string(sizes_[i]) + " exceeds universe size " +
                                   std::to_string(n_));
            }
        }
    }

    ProblemSpec(std::uint64_t n, std::vector<std::uint64_t> sizes)
        : ProblemSpec(n, SubsetSizes(std::move(sizes))) {}
    ProblemSpec(std::uint64_t n, std::initializer_list<std::uint64_t> sizes)
        : ProblemSpec(n, SubsetSizes(std::vector<std::uint64_t>(sizes))) {}

    std::uint64_t n() const noexcept { return n_; }
    const SubsetSizes& sizes() const noexcept { return sizes_; }
    std::size_t t_count() const noexcept { return sizes_.t_count(); }
    std::uint64_t m_min() const { return sizes_.m_min(); }

    /// The problem on N-1 elements with every size reduced by one.
    /// Requires every M[i] >= 1.
    ProblemSpec reduced() const {
        if (n_ == 0 || sizes_.m_min() == 0) {
            throw domain_error("cannot reduce a problem with a zero subset size");
        }
        std::vector<std::uint64_t> m(sizes_.begin(), sizes_.end());
        for (auto& x : m) --x;
        return ProblemSpec(n_ - 1, std::move(m));
    }

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

private:
    std::uint64_t n_;
    SubsetSizes sizes_;
};

enum class OverlapKind { exactly, at_least };

/// LO = t (exactly) or LO >= t (at_least).
struct OverlapFeature {
    OverlapKind kind = OverlapKind::exactly;
    std::size_t t = 0;

    bool matches(std::size_t level) const noexcept {
        return kind == OverlapKind::exactly ? level == t : level >= t;
    }

    void validate(std::size_t t_count) const {
        if (t > t_count) {
            throw domain_error("overlap level " + std::to_string(t) + " exceeds subset count " +
                               std::to_string(t_count));
        }
    }

    std::string label() const {
        return (kind == OverlapKind::exactly ? "LO=" : "LO>=") + std::to_string(t);
    }

    friend bool operator==(const OverlapFeature&, const OverlapFeature&) = default;
};

inline OverlapFeature exactly(std::size_t t) { return {OverlapKind::exactly, t}; }
inline OverlapFeature at_least(std::size_t t) { return {OverlapKind::at_least, t}; }

inline std::string_view kind_name(OverlapKind kind) {
    return kind == OverlapKind::exactly ? "exactly" : "at_least";
}

inline OverlapKind parse_kind(std::string_view name) {
    if (name == "exactly" || name == "eq") return OverlapKind::exactly;
    if (name == "at_least" || name == "ge") return OverlapKind::at_least;
    throw domain_error("unknown overlap kind '" + std::string(name) + "'");
}

/// Parses "exactly:2" / "at_least:3".
inline OverlapFeature parse_feature(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw domain_error("feature must look like kind:t, got '" + std::string(text) + "'");
    }
    OverlapFeature f;
    f.kind = parse_kind(text.substr(0, colon));
    const auto level = text.substr(colon + 1);
    if (level.empty() || level.find_first_not_of("0123456789") != std::string_view::npos) {
        throw domain_error("feature level must be a non-negative integer, got '" +
                           std::string(level) + "'");
    }
    f.t = std::stoull(std::string(level));
    return f;
}

/// Elements per level of overlap: counts[lo] for lo = 0..T.
struct LOHistogram {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const {
        return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    }

    /// Elements matching a feature: counts[t] or the tail sum from t.
    std::uint64_t count(const OverlapFeature& f) const {
        std::uint64_t k = 0;
        for (std::size_t lo = 0; lo < counts.size(); ++lo) {
            if (f.matches(lo)) k += counts[lo];
        }
        return k;
    }

    friend bool operator==(const LOHistogram&, const LOHistogram&) = default;
};

}  // namespace ghgd

#endif  // GHGD_PROBLEM_HPP
