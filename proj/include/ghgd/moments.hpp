#ifndef GHGD_MOMENTS_HPP
#define GHGD_MOMENTS_HPP

// Exact moments of overlap counts.
//
// Full overlap (LO = T) has closed forms for the mean and variance and a
// recursion over reduced problems (N-1, M[i]-1) for every raw moment.
// Partial overlap means come from an inclusion-exclusion sum over the
// elementary symmetric polynomials of the sizes. First and second moments
// of any feature are also available from a per-element indicator
// decomposition, which is the reference the closed forms are checked against.

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ghgd/distribution.hpp"
#include "ghgd/error.hpp"
#include "ghgd/exact.hpp"
#include "ghgd/problem.hpp"

namespace ghgd {

struct SummaryStatistics {
    ExactRatio mean;
    ExactRatio variance;
    std::vector<ExactRatio> raw_moments;      // raw_moments[0] == 1
    std::vector<ExactRatio> central_moments;  // central_moments[0] == 1, [1] == 0
};

/// Central moments from raw moments by binomial expansion about the mean.
inline std::vector<ExactRatio> central_from_raw(const std::vector<ExactRatio>& raw) {
    std::vector<ExactRatio> central(raw.size());
    if (raw.empty()) return central;
    const ExactRatio mu = raw.size() > 1 ? raw[1] : ExactRatio(0);
    for (std::size_t v = 0; v < raw.size(); ++v) {
        ExactRatio sum(0);
        ExactRatio mu_pow(1);  // mu^(v-j), built from j = v downwards
        for (std::size_t step = 0; step <= v; ++step) {
            const std::size_t j = v - step;
            ExactRatio term = ExactRatio(binom(v, static_cast<std::int64_t>(j))) * raw[j] * mu_pow;
            if (step % 2 == 0) sum += term;
            else sum -= term;
            mu_pow *= mu;
        }
        central[v] = std::move(sum);
    }
    return central;
}

inline SummaryStatistics summarize(std::vector<ExactRatio> raw) {
    SummaryStatistics s;
    s.central_moments = central_from_raw(raw);
    s.mean = raw.size() > 1 ? raw[1] : ExactRatio(0);
    s.variance = raw.size() > 2 ? s.central_moments[2] : ExactRatio(0);
    s.raw_moments = std::move(raw);
    return s;
}

namespace detail {

/// E(k, LO = T) of the problem reduced `depth` times; zero once any size reaches zero.
inline ExactRatio full_mean_at_depth(const ProblemSpec& spec, std::uint64_t depth) {
    BigInt product(1);
    for (auto m : spec.sizes()) {
        if (m <= depth) return ExactRatio(0);
        product *= (m - depth);
    }
    const BigInt denom = pow_int(BigInt(spec.n() - depth), spec.t_count() - 1);
    return ExactRatio(product, denom);
}

}  // namespace detail

/// E(k, LO = T) = prod_i M[i] / N^(T-1).
inline ExactRatio expectation_full(const ProblemSpec& spec) {
    if (spec.n() == 0) throw domain_error("expectation_full requires N >= 1");
    return detail::full_mean_at_depth(spec, 0);
}

/// Raw moments E(k^0..k^v_max) of the full-overlap count via
/// E(k^v) = E(k) * sum_{i<v} C(v-1, i) E'(k^i), E' on the reduced problem.
inline std::vector<ExactRatio> raw_moments_full(const ProblemSpec& spec, unsigned v_max) {
    // table[depth][v] for v <= v_max - depth
    std::vector<std::vector<ExactRatio>> table(v_max + 1);
    for (unsigned step = 0; step <= v_max; ++step) {
        const unsigned depth = v_max - step;
        const unsigned orders = v_max - depth;
        auto& row = table[depth];
        row.assign(orders + 1, ExactRatio(0));
        row[0] = 1;
        if (orders == 0) continue;
        const ExactRatio mean = detail::full_mean_at_depth(spec, depth);
        if (mean == 0) continue;
        const auto& deeper = table[depth + 1];
        for (unsigned v = 1; v <= orders; ++v) {
            ExactRatio sum(0);
            for (unsigned i = 0; i < v; ++i) {
                sum += ExactRatio(binom(v - 1, i)) * deeper[i];
            }
            row[v] = mean * sum;
        }
    }
    return table[0];
}

inline std::vector<ExactRatio> central_moments_full(const ProblemSpec& spec, unsigned v_max) {
    return central_from_raw(raw_moments_full(spec, v_max));
}

/// Var(k, LO = T) = E(k) (1 + E'(k) - E(k)).
inline ExactRatio variance_full(const ProblemSpec& spec) {
    const ExactRatio mean = detail::full_mean_at_depth(spec, 0);
    if (mean == 0) return ExactRatio(0);
    const ExactRatio reduced = detail::full_mean_at_depth(spec, 1);
    return mean * (1 + reduced - mean);
}

inline SummaryStatistics summary_full(const ProblemSpec& spec, unsigned v_max = 4) {
    return summarize(raw_moments_full(spec, std::max(v_max, 2u)));
}

namespace detail {

/// Inclusion-exclusion mean for 1 <= t <= T.
inline ExactRatio partial_mean_positive(const ProblemSpec& spec, const OverlapFeature& f) {
    const std::size_t t_count = spec.t_count();
    const auto e = elementary_symmetric_all(spec.sizes().values());
    const BigInt n(spec.n());
    ExactRatio sum(0);
    for (std::size_t l = 0; l + f.t <= t_count; ++l) {
        const std::size_t z = f.t + l;
        BigInt coeff;
        if (f.kind == OverlapKind::exactly) {
            coeff = binom(z, static_cast<std::int64_t>(l));
            if (l % 2 == 1) coeff = -coeff;
        } else {
            coeff = alt_binom_sum(z, 0, static_cast<std::int64_t>(l));
        }
        if (coeff == 0 || e[z] == 0) continue;
        sum += ExactRatio(coeff * e[z], pow_int(n, z - 1));
    }
    return sum;
}

}  // namespace detail

/// E(k, LO = t) or E(k, LO >= t) by inclusion-exclusion over S(M^z).
///
/// t = 0 follows from the partition of the universe: E(k, LO >= 0) = N and
/// E(k, LO = 0) = N - sum_{t >= 1} E(k, LO = t).
inline ExactRatio expectation_partial(const ProblemSpec& spec, const OverlapFeature& feature) {
    feature.validate(spec.t_count());
    if (spec.n() == 0) return ExactRatio(0);
    if (feature.t >= 1) return detail::partial_mean_positive(spec, feature);
    if (feature.kind == OverlapKind::at_least) return ExactRatio(spec.n());
    ExactRatio rest(0);
    for (std::size_t t = 1; t <= spec.t_count(); ++t) {
        rest += detail::partial_mean_positive(spec, exactly(t));
    }
    return ExactRatio(spec.n()) - rest;
}

struct IndicatorConfig {
    /// Largest subset count accepted.
    std::size_t pattern_budget = 16;
};

/// First and second moments of any feature from per-element indicators.
///
/// k = sum_e 1[e matches], so E(k) = N P(one element matches) and
/// E(k^2) = E(k) + N(N-1) P(two given elements both match). Each subset
/// contributes independently to an element's membership pattern; the sums
/// over membership patterns are accumulated by the number of subsets
/// containing each element.
inline SummaryStatistics indicator_moments(const ProblemSpec& spec, const OverlapFeature& feature,
                                           const IndicatorConfig& config = {}) {
    feature.validate(spec.t_count());
    const std::size_t t_count = spec.t_count();
    if (t_count > config.pattern_budget) {
        throw budget_exceeded("indicator_moments: " + std::to_string(t_count) +
                                  " subsets exceed the pattern budget of " +
                                  std::to_string(config.pattern_budget) +
                                  "; use exact_distribution or sample_distribution",
                              t_count);
    }
    const std::uint64_t n = spec.n();
    if (n == 0) return summarize({ExactRatio(1), ExactRatio(0), ExactRatio(0)});

    // single[c] = P(element lies in exactly c of the subsets drawn so far)
    std::vector<ExactRatio> single(t_count + 1, ExactRatio(0));
    single[0] = 1;
    for (std::size_t i = 0; i < t_count; ++i) {
        const ExactRatio in(BigInt(spec.sizes()[i]), BigInt(n));
        const ExactRatio out = 1 - in;
        for (std::size_t c = i + 1; c >= 1; --c) single[c] = single[c] * out + single[c - 1] * in;
        single[0] *= out;
    }
    ExactRatio p_one(0);
    for (std::size_t c = 0; c <= t_count; ++c) {
        if (feature.matches(c)) p_one += single[c];
    }
    const ExactRatio mean = ExactRatio(n) * p_one;

    ExactRatio second = mean;
    if (n >= 2) {
        // pair[a][b] = P(element e in a subsets, element f in b subsets)
        const std::size_t width = t_count + 1;
        std::vector<ExactRatio> pair(width * width, ExactRatio(0));
        std::vector<ExactRatio> next(width * width);
        pair[0] = 1;
        const BigInt pairs = BigInt(n) * (n - 1);
        for (std::size_t i = 0; i < t_count; ++i) {
            const std::uint64_t m = spec.sizes()[i];
            const ExactRatio both(BigInt(m) * (m == 0 ? 0 : m - 1), pairs);
            const ExactRatio one(BigInt(m) * (n - m), pairs);
            const ExactRatio none(BigInt(n - m) * (n - m == 0 ? 0 : n - m - 1), pairs);
            std::fill(next.begin(), next.end(), ExactRatio(0));
            for (std::size_t a = 0; a <= i; ++a) {
                for (std::size_t b = 0; b <= i; ++b) {
                    const ExactRatio& p = pair[a * width + b];
                    if (p == 0) continue;
                    next[(a + 1) * width + b + 1] += p * both;
                    next[(a + 1) * width + b] += p * one;
                    next[a * width + b + 1] += p * one;
                    next[a * width + b] += p * none;
                }
            }
            std::swap(pair, next);
        }
        ExactRatio p_two(0);
        for (std::size_t a = 0; a <= t_count; ++a) {
            if (!feature.matches(a)) continue;
            for (std::size_t b = 0; b <= t_count; ++b) {
                if (feature.matches(b)) p_two += pair[a * width + b];
            }
        }
        second += ExactRatio(pairs) * p_two;
    }
    return summarize({ExactRatio(1), mean, second});
}

/// E(k^2, LO = t) - E(k, LO = t) when every subset has size m (d = T - t):
/// sum_{x,o<=d} sum_{l<=t+o} (-1)^(t+l+x) C(d,o) C(d+l-o,d) C(t+o,l) C(t+x,x) C(T,t+x)
///     m^(l+t+x) / ((N-1)^(t+o-1) N^(t+x-1)).
inline ExactRatio second_moment_equalM_closed(std::uint64_t n, std::uint64_t m, std::size_t t_count,
                                              std::size_t t) {
    if (t < 1 || t > t_count) throw domain_error("equal-size closed form requires 1 <= t <= T");
    if (m > n) throw domain_error("subset size exceeds universe size");
    if (n < 2) throw domain_error("equal-size closed form requires N >= 2");
    const std::size_t d = t_count - t;
    const BigInt big_n(n), big_n1(n - 1), big_m(m);
    ExactRatio sum(0);
    for (std::size_t x = 0; x <= d; ++x) {
        const BigInt outer = binom(t + x, static_cast<std::int64_t>(x)) *
                             binom(t_count, static_cast<std::int64_t>(t + x));
        const BigInt n_pow = pow_int(big_n, t + x - 1);
        for (std::size_t o = 0; o <= d; ++o) {
            const BigInt middle = outer * binom(d, static_cast<std::int64_t>(o));
            const BigInt n1_pow = pow_int(big_n1, t + o - 1);
            for (std::size_t l = 0; l <= t + o; ++l) {
                BigInt coeff = middle * binom(d + l - o, static_cast<std::int64_t>(d)) *
                               binom(t + o, static_cast<std::int64_t>(l)) * pow_int(big_m, l + t + x);
                if (coeff == 0) continue;
                if ((t + l + x) % 2 == 1) coeff = -coeff;
                sum += ExactRatio(coeff, n1_pow * n_pow);
            }
        }
    }
    return sum;
}

/// Raw moments 0..v_max and the derived central moments of an exact distribution.
inline SummaryStatistics summary_from_distribution(const ExactOverlapDistribution& dist,
                                                   unsigned v_max = 2) {
    std::vector<ExactRatio> raw;
    for (unsigned v = 0; v <= std::max(v_max, 2u); ++v) raw.push_back(dist.raw_moment(v));
    return summarize(std::move(raw));
}

}  // namespace ghgd

#endif  // GHGD_MOMENTS_HPP
