#ifndef GHGD_DISTRIBUTION_HPP
#define GHGD_DISTRIBUTION_HPP

// Exact overlap-count distributions.
//
// Three independent routes are provided:
//   * full_overlap_counts   top-down recursion for the common intersection size,
//   * exact_distribution    layered dynamic program over level-of-overlap histograms,
//   * enumerate_oracle      explicit sweep over every tuple of subsets.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "ghgd/error.hpp"
#include "ghgd/exact.hpp"
#include "ghgd/problem.hpp"

namespace ghgd {

/// Number of ways to draw all T subsets: prod_i C(N, M[i]).
inline BigCount total_selections(const ProblemSpec& spec) {
    BigCount total(1);
    for (auto m : spec.sizes()) total *= binom(spec.n(), static_cast<std::int64_t>(m));
    return total;
}

/// Counts of T-tuples by exact overlap count k of one feature.
struct ExactOverlapDistribution {
    ProblemSpec spec;
    OverlapFeature feature;
    std::map<std::uint64_t, BigCount> counts;  // reachable k only
    BigCount normalizer;

    BigCount count(std::uint64_t k) const {
        auto it = counts.find(k);
        return it == counts.end() ? BigCount(0) : it->second;
    }

    Rational pmf(std::uint64_t k) const { return Rational(count(k), normalizer); }

    BigCount counted_total() const {
        BigCount sum(0);
        for (const auto& [k, c] : counts) sum += c;
        return sum;
    }

    /// P(X >= k).
    Rational upper_tail(std::uint64_t k) const {
        BigCount sum(0);
        for (auto it = counts.lower_bound(k); it != counts.end(); ++it) sum += it->second;
        return Rational(sum, normalizer);
    }

    /// P(X <= k).
    Rational lower_tail(std::uint64_t k) const {
        BigCount sum(0);
        for (auto it = counts.begin(); it != counts.end() && it->first <= k; ++it) sum += it->second;
        return Rational(sum, normalizer);
    }

    /// E(k^v) over the distribution.
    Rational raw_moment(unsigned v) const {
        BigInt sum(0);
        for (const auto& [k, c] : counts) sum += pow_int(BigInt(k), v) * c;
        return Rational(sum, normalizer);
    }

    Rational mean() const { return raw_moment(1); }

    Rational variance() const {
        const Rational mu = mean();
        return raw_moment(2) - mu * mu;
    }

    /// Smallest k with the largest count.
    std::uint64_t mode() const {
        std::uint64_t best = 0;
        const BigCount* best_count = nullptr;
        for (const auto& [k, c] : counts) {
            if (best_count == nullptr || c > *best_count) {
                best = k;
                best_count = &c;
            }
        }
        return best;
    }

    /// True when the counts over the support rise (weakly) and then fall (weakly).
    bool is_unimodal() const {
        bool falling = false;
        const BigCount* prev = nullptr;
        for (const auto& [k, c] : counts) {
            if (c == 0) continue;
            if (prev != nullptr) {
                if (c < *prev) falling = true;
                else if (c > *prev && falling) return false;
            }
            prev = &c;
        }
        return true;
    }
};

/// C(k, T) for every k in 0..M_min, by the top-down recursion
/// C(k) = C(N,k) prod_i C(N-k, M[i]-k) - sum_{i>k} C(i,k) C(i).
inline std::vector<BigCount> full_overlap_counts(const ProblemSpec& spec) {
    const std::uint64_t m_min = spec.m_min();
    const std::uint64_t n = spec.n();
    std::vector<BigCount> c(m_min + 1);
    for (std::uint64_t step = 0; step <= m_min; ++step) {
        const std::uint64_t k = m_min - step;
        BigCount value = binom(n, static_cast<std::int64_t>(k));
        for (auto m : spec.sizes()) value *= binom(n - k, static_cast<std::int64_t>(m - k));
        for (std::uint64_t i = k + 1; i <= m_min; ++i) {
            value -= binom(i, static_cast<std::int64_t>(k)) * c[i];
        }
        c[k] = std::move(value);
    }
    return c;
}

/// Number of T-tuples whose common intersection has exactly k elements.
inline BigCount count_full_overlap(const ProblemSpec& spec, std::uint64_t k) {
    if (k > spec.n()) {
        throw domain_error("count_full_overlap: k = " + std::to_string(k) +
                           " exceeds universe size " + std::to_string(spec.n()));
    }
    if (k > spec.m_min()) return BigCount(0);
    return full_overlap_counts(spec)[k];
}

/// Checks k * C_{N,M}(k) == N * C_{N-1,M-1}(k-1) with integer arithmetic.
inline bool reduction_identity_check(const ProblemSpec& spec, std::uint64_t k) {
    if (spec.m_min() == 0) {
        throw domain_error("reduction identity requires every subset size >= 1");
    }
    if (k < 1 || k > spec.m_min()) {
        throw domain_error("reduction identity requires 1 <= k <= M_min");
    }
    const ProblemSpec smaller = spec.reduced();
    const BigCount lhs = BigCount(k) * count_full_overlap(spec, k);
    const BigCount rhs = BigCount(spec.n()) * count_full_overlap(smaller, k - 1);
    return lhs == rhs;
}

struct DistributionConfig {
    /// Upper bound on weighted histogram states summed over all layers.
    std::uint64_t state_budget = 100'000'000;
    /// Worker threads used to expand a layer; results do not depend on it.
    unsigned workers = 1;
};

namespace detail {

using Histogram = std::vector<std::uint32_t>;

struct HistogramHash {
    std::size_t operator()(const Histogram& h) const noexcept {
        std::uint64_t x = 0xcbf29ce484222325ULL;
        for (auto v : h) {
            x ^= v;
            x *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(x ^ (x >> 29));
    }
};

using Layer = std::unordered_map<Histogram, BigCount, HistogramHash>;

/// Lazily filled rows of Pascal's triangle, k <= k_max.
class PascalRows {
public:
    PascalRows(std::uint64_t n_max, std::uint64_t k_max) : rows_(n_max + 1), k_max_(k_max) {}

    const BigCount& operator()(std::uint32_t n, std::uint32_t k) {
        auto& row = rows_[n];
        if (row.empty()) {
            const std::uint64_t width = std::min<std::uint64_t>(n, k_max_) + 1;
            row.reserve(width);
            row.emplace_back(1);
            for (std::uint64_t j = 1; j < width; ++j) {
                row.push_back(row.back() * (n - j + 1) / j);
            }
        }
        return row[k];
    }

private:
    std::vector<std::vector<BigCount>> rows_;
    std::uint64_t k_max_;
};

/// Expands a slice of one layer by one subset draw of size `demand`.
class LayerExpander {
public:
    LayerExpander(PascalRows& pascal, std::uint32_t demand, Layer& out)
        : pascal_(pascal), demand_(demand), out_(out) {}

    /// Returns the number of new states inserted into the output layer.
    std::uint64_t expand(const Histogram& state, const BigCount& weight) {
        state_ = &state;
        weight_ = &weight;
        const std::size_t width = state.size();
        split_.assign(width, 0);
        partial_.resize(width + 1);
        partial_[0] = 1;
        suffix_.assign(width + 1, 0);
        for (std::size_t j = width; j-- > 0;) suffix_[j] = suffix_[j + 1] + state[j];
        inserted_ = 0;
        if (suffix_[0] >= demand_) recurse(0, demand_);
        return inserted_;
    }

private:
    void recurse(std::size_t j, std::uint64_t remaining) {
        const Histogram& r = *state_;
        const std::size_t width = r.size();
        if (j + 1 == width) {
            // last slot takes whatever is left; feasibility was ensured by the caller
            split_[j] = static_cast<std::uint32_t>(remaining);
            partial_[j + 1] = partial_[j] * pascal_(r[j], split_[j]);
            emit();
            return;
        }
        const std::uint64_t capacity_after = suffix_[j + 1];
        const std::uint64_t lo = remaining > capacity_after ? remaining - capacity_after : 0;
        const std::uint64_t hi = std::min<std::uint64_t>(r[j], remaining);
        for (std::uint64_t take = lo; take <= hi; ++take) {
            split_[j] = static_cast<std::uint32_t>(take);
            partial_[j + 1] = partial_[j] * pascal_(r[j], split_[j]);
            recurse(j + 1, remaining - take);
        }
    }

    void emit() {
        const Histogram& r = *state_;
        const std::size_t width = r.size();
        Histogram next(width + 1);
        next[0] = r[0] - split_[0];
        for (std::size_t lo = 1; lo < width; ++lo) next[lo] = r[lo] - split_[lo] + split_[lo - 1];
        next[width] = split_[width - 1];
        auto [it, inserted] = out_.try_emplace(std::move(next));
        if (inserted) ++inserted_;
        mpz_addmul(it->second.backend().data(), weight_->backend().data(),
                   partial_[width].backend().data());
    }

    PascalRows& pascal_;
    std::uint32_t demand_;
    Layer& out_;
    const Histogram* state_ = nullptr;
    const BigCount* weight_ = nullptr;
    std::vector<std::uint32_t> split_;
    std::vector<std::uint64_t> suffix_;
    std::vector<BigCount> partial_;
    std::uint64_t inserted_ = 0;
};

inline void merge_into(Layer& into, Layer&& from) {
    if (into.empty()) {
        into = std::move(from);
        return;
    }
    for (auto& [key, weight] : from) {
        auto [it, inserted] = into.try_emplace(key);
        it->second += weight;
    }
}

}  // namespace detail

/// Weighted terminal level-of-overlap histograms after all T draws.
///
/// Every feature's distribution can be read from the same terminal layer.
class TerminalStates {
public:
    TerminalStates(ProblemSpec spec, std::vector<std::pair<detail::Histogram, BigCount>> states,
                   std::uint64_t visited)
        : spec_(std::move(spec)), states_(std::move(states)), visited_(visited) {}

    const ProblemSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return states_.size(); }
    /// Weighted states created across all layers.
    std::uint64_t visited() const noexcept { return visited_; }
    const auto& states() const noexcept { return states_; }

    ExactOverlapDistribution distribution(const OverlapFeature& feature) const {
        feature.validate(spec_.t_count());
        ExactOverlapDistribution out{spec_, feature, {}, total_selections(spec_)};
        for (const auto& [hist, weight] : states_) {
            std::uint64_t k = 0;
            for (std::size_t lo = 0; lo < hist.size(); ++lo) {
                if (feature.matches(lo)) k += hist[lo];
            }
            out.counts[k] += weight;
        }
        if (out.counted_total() != out.normalizer) {
            throw std::logic_error("exact_distribution: checksum mismatch against total selections");
        }
        return out;
    }

private:
    ProblemSpec spec_;
    std::vector<std::pair<detail::Histogram, BigCount>> states_;
    std::uint64_t visited_;
};

/// Runs the layered dynamic program over level-of-overlap histograms.
///
/// Subsets are processed largest first; the resulting distribution does not
/// depend on the order, only the intermediate state counts do.
inline TerminalStates terminal_states(const ProblemSpec& spec, const DistributionConfig& config = {}) {
    if (spec.n() > 0xffffffffULL) throw domain_error("universe size too large for the exact engine");

    std::vector<std::uint64_t> order(spec.sizes().begin(), spec.sizes().end());
    std::sort(order.begin(), order.end(), std::greater<>());

    detail::PascalRows pascal(spec.n(), order.front());
    detail::Layer layer;
    layer.emplace(detail::Histogram{static_cast<std::uint32_t>(spec.n() - order[0]),
                                    static_cast<std::uint32_t>(order[0])},
                  binom(spec.n(), static_cast<std::int64_t>(order[0])));
    std::uint64_t visited = 1;
    const unsigned workers = std::max(1u, config.workers);

    auto check_budget = [&](std::uint64_t extra) {
        if (visited + extra > config.state_budget) {
            throw budget_exceeded("exact_distribution: state budget of " +
                                      std::to_string(config.state_budget) + " exceeded",
                                  visited + extra);
        }
    };

    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto demand = static_cast<std::uint32_t>(order[i]);
        std::vector<std::pair<const detail::Histogram*, const BigCount*>> items;
        items.reserve(layer.size());
        for (const auto& [h, w] : layer) items.emplace_back(&h, &w);

        detail::Layer next;
        if (workers == 1 || items.size() < 2 * workers) {
            detail::LayerExpander expander(pascal, demand, next);
            std::uint64_t created = 0;
            for (const auto& [h, w] : items) {
                created += expander.expand(*h, *w);
                check_budget(created);
            }
            visited += created;
        } else {
            // Rows are filled whole on first touch, so after this pass workers only read.
            for (const auto& [h, w] : items) {
                for (auto r : *h) (void)pascal(r, 0);
            }
            std::vector<detail::Layer> partial(workers);
            std::vector<std::uint64_t> created(workers, 0);
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    detail::LayerExpander expander(pascal, demand, partial[w]);
                    for (std::size_t idx = w; idx < items.size(); idx += workers) {
                        created[w] += expander.expand(*items[idx].first, *items[idx].second);
                        if (created[w] + visited > config.state_budget) return;
                    }
                });
            }
            for (auto& t : pool) t.join();
            std::uint64_t sum = 0;
            for (auto c : created) sum += c;
            check_budget(sum);
            for (auto& p : partial) detail::merge_into(next, std::move(p));
            visited += next.size();
        }
        layer = std::move(next);
    }

    std::vector<std::pair<detail::Histogram, BigCount>> states;
    states.reserve(layer.size());
    for (auto& [h, w] : layer) states.emplace_back(h, std::move(w));
    std::sort(states.begin(), states.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return TerminalStates(spec, std::move(states), visited);
}

/// Exact distribution of the overlap count for one feature.
inline ExactOverlapDistribution exact_distribution(const ProblemSpec& spec, const OverlapFeature& feature,
                                                   const DistributionConfig& config = {}) {
    feature.validate(spec.t_count());
    return terminal_states(spec, config).distribution(feature);
}

namespace detail {

/// Visits the level-of-overlap histogram of every T-tuple of subsets.
template <typename Visitor>
void for_each_tuple(const ProblemSpec& spec, Visitor&& visit) {
    const std::size_t t_count = spec.t_count();
    const auto n = static_cast<std::size_t>(spec.n());
    std::vector<std::uint32_t> level(n, 0);
    std::vector<std::uint64_t> hist(t_count + 1, 0);
    hist[0] = n;

    auto bump = [&](std::size_t e, int delta) {
        --hist[level[e]];
        level[e] = static_cast<std::uint32_t>(static_cast<int>(level[e]) + delta);
        ++hist[level[e]];
    };

    std::function<void(std::size_t)> draw = [&](std::size_t i) {
        if (i == t_count) {
            visit(static_cast<const std::vector<std::uint64_t>&>(hist));
            return;
        }
        const auto m = static_cast<std::size_t>(spec.sizes()[i]);
        std::vector<std::size_t> idx(m);
        for (std::size_t j = 0; j < m; ++j) idx[j] = j;
        while (true) {
            for (auto e : idx) bump(e, +1);
            draw(i + 1);
            for (auto e : idx) bump(e, -1);
            // next combination in lexicographic order
            std::size_t j = m;
            while (j > 0 && idx[j - 1] == n - m + j - 1) --j;
            if (j == 0) break;
            ++idx[j - 1];
            for (std::size_t l = j; l < m; ++l) idx[l] = idx[l - 1] + 1;
        }
    };
    draw(0);
}

}  // namespace detail

/// Brute-force distribution by visiting every T-tuple of subsets explicitly.
inline ExactOverlapDistribution enumerate_oracle(const ProblemSpec& spec, const OverlapFeature& feature,
                                                 std::uint64_t tuple_budget = 10'000'000) {
    feature.validate(spec.t_count());
    const BigCount total = total_selections(spec);
    if (total > tuple_budget) {
        throw budget_exceeded("enumerate_oracle: " + total.str() + " tuples exceed the budget of " +
                                  std::to_string(tuple_budget),
                              total > BigCount(UINT64_MAX) ? UINT64_MAX
                                                           : total.convert_to<std::uint64_t>());
    }
    std::map<std::uint64_t, std::uint64_t> tally;
    detail::for_each_tuple(spec, [&](const std::vector<std::uint64_t>& hist) {
        std::uint64_t k = 0;
        for (std::size_t lo = 0; lo < hist.size(); ++lo) {
            if (feature.matches(lo)) k += hist[lo];
        }
        ++tally[k];
    });
    ExactOverlapDistribution out{spec, feature, {}, total};
    for (const auto& [k, c] : tally) out.counts.emplace(k, BigCount(c));
    return out;
}

}  // namespace ghgd

#endif  // GHGD_DISTRIBUTION_HPP
