#ifndef GHGD_SAMPLER_HPP
#define GHGD_SAMPLER_HPP

// Seeded Monte Carlo draws of T independent uniform subsets.
//
// Generator: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Worker w is seeded with splitmix64(seed + w * 0x9E3779B97F4A7C15).
// Bounded integers use rejection on the top of the 64-bit range followed by a
// modulo, so no implementation-defined distribution object is involved.
// Each subset is an index-space partial Fisher-Yates shuffle whose swaps are
// undone after use.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include "ghgd/error.hpp"
#include "ghgd/problem.hpp"

namespace ghgd {

struct SampleReport {
    ProblemSpec spec;
    OverlapFeature feature;
    std::uint64_t draws = 0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;  // population form, divided by draws
    std::map<std::uint64_t, std::uint64_t> histogram;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    double empirical_pmf(std::uint64_t k) const {
        auto it = histogram.find(k);
        return it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(draws);
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t worker_seed(std::uint64_t seed, unsigned worker) {
    return splitmix64(seed + static_cast<std::uint64_t>(worker) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform integer in [0, bound), bound >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    constexpr std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = top - (top % bound + 1) % bound;  // largest multiple of bound, minus one
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

/// Draws subsets and records level-of-overlap histograms; scratch is O(N).
class SubsetSampler {
public:
    SubsetSampler(const ProblemSpec& spec, std::uint64_t seed)
        : spec_(spec), rng_(seed), perm_(spec.n()), level_(spec.n(), 0),
          hist_(spec.t_count() + 1, 0) {
        for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = static_cast<std::uint32_t>(i);
        touched_.reserve(spec.n());
        swaps_.reserve(spec.sizes().m_max());
    }

    /// One draw of all T subsets; returns the level-of-overlap histogram.
    const std::vector<std::uint64_t>& draw() {
        for (auto e : touched_) level_[e] = 0;
        touched_.clear();
        const std::uint64_t n = spec_.n();
        for (auto m : spec_.sizes()) {
            swaps_.clear();
            for (std::uint64_t j = 0; j < m; ++j) {
                const std::uint64_t r = j + uniform_below(rng_, n - j);
                std::swap(perm_[j], perm_[r]);
                swaps_.push_back(r);
                const std::uint32_t e = perm_[j];
                assert(level_[e] < spec_.t_count());
                if (level_[e]++ == 0) touched_.push_back(e);
            }
            for (std::size_t j = swaps_.size(); j-- > 0;) std::swap(perm_[j], perm_[swaps_[j]]);
        }
        std::fill(hist_.begin(), hist_.end(), 0);
        for (auto e : touched_) ++hist_[level_[e]];
        hist_[0] = n - touched_.size();
        return hist_;
    }

private:
    const ProblemSpec& spec_;
    std::mt19937_64 rng_;
    std::vector<std::uint32_t> perm_;
    std::vector<std::uint32_t> level_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::uint64_t> swaps_;
    std::vector<std::uint64_t> hist_;
};

/// Monte Carlo histogram of a feature's overlap count over `draws` draws.
inline SampleReport sample_distribution(const ProblemSpec& spec, const OverlapFeature& feature,
                                        std::uint64_t draws, std::uint64_t seed, unsigned workers = 1) {
    feature.validate(spec.t_count());
    if (draws < 1) throw domain_error("sample_distribution requires draws >= 1");
    if (spec.n() > std::numeric_limits<std::uint32_t>::max()) {
        throw domain_error("universe size too large for the sampler");
    }
    workers = std::max(1u, workers);
    std::vector<std::map<std::uint64_t, std::uint64_t>> partial(workers);

    auto run = [&](unsigned w) {
        const std::uint64_t share = draws / workers + (w < draws % workers ? 1 : 0);
        SubsetSampler sampler(spec, worker_seed(seed, w));
        auto& tally = partial[w];
        for (std::uint64_t d = 0; d < share; ++d) {
            const auto& hist = sampler.draw();
            std::uint64_t k = 0;
            for (std::size_t lo = 0; lo < hist.size(); ++lo) {
                if (feature.matches(lo)) k += hist[lo];
            }
            ++tally[k];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }

    SampleReport report{spec, feature, draws, 0.0, 0.0, {}, seed, workers};
    for (const auto& tally : partial) {
        for (const auto& [k, c] : tally) report.histogram[k] += c;
    }
    long double sum = 0, sum_sq = 0;
    for (const auto& [k, c] : report.histogram) {
        sum += static_cast<long double>(k) * c;
    }
    const long double mean = sum / static_cast<long double>(draws);
    for (const auto& [k, c] : report.histogram) {
        const long double dev = static_cast<long double>(k) - mean;
        sum_sq += dev * dev * c;
    }
    report.empirical_mean = static_cast<double>(mean);
    report.empirical_variance = static_cast<double>(sum_sq / static_cast<long double>(draws));
    return report;
}

}  // namespace ghgd

#endif  // GHGD_SAMPLER_HPP
