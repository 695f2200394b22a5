#ifndef GHGD_INFERENCE_HPP
#define GHGD_INFERENCE_HPP

// Chebyshev-type tail bounds and hit statistics for observed overlap counts.
//
// Two bounds on P(|X - mu| >= lambda) are used:
//   standard   sigma^2 / lambda^2
//   unimodal   4 (sigma^2 + s^2) / (9 (lambda - s)^2), valid for lambda > s,
// where s bounds |mean - mode|.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghgd/distribution.hpp"
#include "ghgd/error.hpp"
#include "ghgd/exact.hpp"
#include "ghgd/moments.hpp"
#include "ghgd/problem.hpp"

namespace ghgd {

enum class ZMinRule {
    floor_of_interval,  // floor(mu + sigma / sqrt(alpha))
    strict_ceil,        // smallest integer Z > mu with sigma^2 / (Z - mu)^2 < alpha
};

inline std::string_view zmin_rule_name(ZMinRule rule) {
    return rule == ZMinRule::floor_of_interval ? "floor_of_interval" : "strict_ceil";
}

inline ZMinRule parse_zmin_rule(std::string_view name) {
    if (name == "floor_of_interval" || name == "floor") return ZMinRule::floor_of_interval;
    if (name == "strict_ceil" || name == "strict") return ZMinRule::strict_ceil;
    throw domain_error("unknown z_min rule '" + std::string(name) + "'");
}

struct InferenceConfig {
    double alpha = 0.05;
    double mode_gap_s = 1.0;
    ZMinRule z_min_rule = ZMinRule::floor_of_interval;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
        if (!(mode_gap_s >= 0.0)) throw domain_error("mode gap s must be non-negative");
    }
};

/// sigma^2 / lambda^2; may exceed 1.
inline double chebyshev_standard(const ExactRatio& /*mean*/, const ExactRatio& variance, double lambda) {
    if (!(lambda > 0.0)) throw domain_error("chebyshev_standard requires lambda > 0");
    return to_double(variance) / (lambda * lambda);
}

/// 4 (sigma^2 + s^2) / (9 (lambda - s)^2) when lambda > s, otherwise nullopt.
inline std::optional<double> chebyshev_unimodal(const ExactRatio& /*mean*/, const ExactRatio& variance,
                                                double s, double lambda) {
    if (!(lambda > s)) return std::nullopt;
    const double gap = lambda - s;
    return 4.0 * (to_double(variance) + s * s) / (9.0 * gap * gap);
}

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// mu -/+ sigma / sqrt(alpha), lower end clamped at 0.
inline Interval credibility_interval(const ExactRatio& mean, const ExactRatio& variance, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
    const double mu = to_double(mean);
    const double half = std::sqrt(to_double(variance)) / std::sqrt(alpha);
    return {std::max(0.0, mu - half), mu + half};
}

enum class BoundForm { none, standard, unimodal };
enum class Direction { above, below };

inline std::string_view bound_form_name(BoundForm f) {
    switch (f) {
        case BoundForm::standard: return "standard";
        case BoundForm::unimodal: return "unimodal";
        default: return "inapplicable";
    }
}

/// Tightest applicable bound on P(|X - mu| >= lambda).
struct TailBound {
    std::optional<double> value;  // raw, not clamped; nullopt when no form applies
    BoundForm form = BoundForm::none;
    Direction direction = Direction::above;

    double clamped() const { return value ? std::clamp(*value, 0.0, 1.0) : 1.0; }
};

inline TailBound tightest_bound(const ExactRatio& mean, const ExactRatio& variance, double s,
                                double lambda) {
    TailBound out;
    if (lambda > 0.0) {
        out.value = chebyshev_standard(mean, variance, lambda);
        out.form = BoundForm::standard;
    }
    if (auto uni = chebyshev_unimodal(mean, variance, s, lambda); uni && (!out.value || *uni < *out.value)) {
        out.value = uni;
        out.form = BoundForm::unimodal;
    }
    return out;
}

struct HitStatistics {
    std::int64_t z_min = 0;
    std::optional<std::uint64_t> shn;
    std::optional<double> shr;  // fraction in (0, 1]
};

namespace detail {

/// sigma^2 / (z - mu)^2 < alpha, decided exactly (alpha taken as the exact binary value).
inline bool strict_bound_below(const ExactRatio& mean, const ExactRatio& variance, double alpha,
                               std::int64_t z) {
    const ExactRatio gap = ExactRatio(z) - mean;
    if (gap <= 0) return false;
    return variance < ExactRatio(alpha) * gap * gap;
}

}  // namespace detail

inline std::int64_t z_min_value(const ExactRatio& mean, const ExactRatio& variance,
                                const InferenceConfig& config) {
    const long double mu = to_double(mean);
    const long double upper = mu + std::sqrt(static_cast<long double>(to_double(variance))) /
                                       std::sqrt(static_cast<long double>(config.alpha));
    if (config.z_min_rule == ZMinRule::floor_of_interval) {
        return static_cast<std::int64_t>(std::floor(upper));
    }
    const auto above_mean = static_cast<std::int64_t>(std::floor(mu)) + 1;
    std::int64_t z = std::max<std::int64_t>(above_mean, static_cast<std::int64_t>(std::floor(upper)) - 1);
    while (!detail::strict_bound_below(mean, variance, config.alpha, z)) ++z;
    while (z - 1 >= above_mean && ExactRatio(z - 1) > mean &&
           detail::strict_bound_below(mean, variance, config.alpha, z - 1)) {
        --z;
    }
    return z;
}

/// Z_min with statistical hit number NOESS - Z_min and hit rate (NOESS - Z_min) / NOESS.
/// Both are undefined when NOESS <= Z_min or NOESS lies below the mean.
inline HitStatistics hit_statistics(const ExactRatio& mean, const ExactRatio& variance,
                                    std::uint64_t noess, const InferenceConfig& config) {
    config.validate();
    HitStatistics out;
    out.z_min = z_min_value(mean, variance, config);
    const bool below_mean = ExactRatio(noess) < mean;
    if (static_cast<std::int64_t>(noess) > out.z_min && !below_mean) {
        out.shn = noess - static_cast<std::uint64_t>(std::max<std::int64_t>(out.z_min, 0));
        out.shr = static_cast<double>(*out.shn) / static_cast<double>(noess);
    }
    return out;
}

struct InferenceRow {
    OverlapFeature feature;
    ExactRatio mean;
    ExactRatio variance;
    std::uint64_t noess = 0;
    TailBound p_hit;      // deviation |X - mu| >= |NOESS - mu|
    TailBound p_all_hit;  // X >= 1, only when mu < 1
    Interval interval;
    HitStatistics hits;
    std::optional<ExactRatio> exact_tail;  // P(X >= NOESS) from an exact distribution
    std::optional<double> sampled_tail;    // P(X >= NOESS) from Monte Carlo
};

inline InferenceRow inference_row(const ProblemSpec& spec, const OverlapFeature& feature,
                                  std::uint64_t noess, const InferenceConfig& config) {
    InferenceRow row;
    row.feature = feature;
    row.mean = expectation_partial(spec, feature);
    row.variance = indicator_moments(spec, feature).variance;
    row.noess = noess;

    const double mu = to_double(row.mean);
    const double deviation = std::fabs(static_cast<double>(noess) - mu);
    row.p_hit = tightest_bound(row.mean, row.variance, config.mode_gap_s, deviation);
    row.p_hit.direction = ExactRatio(noess) < row.mean ? Direction::below : Direction::above;
    if (row.mean < 1) {
        row.p_all_hit = tightest_bound(row.mean, row.variance, config.mode_gap_s, 1.0 - mu);
    }
    row.interval = credibility_interval(row.mean, row.variance, config.alpha);
    row.hits = hit_statistics(row.mean, row.variance, noess, config);
    return row;
}

/// Rows for LO = t (t = T..1) followed by LO >= t (t = T..1).
inline std::vector<InferenceRow> build_report(const ProblemSpec& spec, const LOHistogram& observed,
                                              const InferenceConfig& config = {}) {
    config.validate();
    if (observed.counts.size() != spec.t_count() + 1) {
        throw domain_error("observed histogram has " + std::to_string(observed.counts.size()) +
                           " levels, expected " + std::to_string(spec.t_count() + 1));
    }
    if (observed.total() != spec.n()) {
        throw domain_error("observed histogram sums to " + std::to_string(observed.total()) +
                           ", expected N = " + std::to_string(spec.n()));
    }
    std::vector<InferenceRow> rows;
    for (auto kind : {OverlapKind::exactly, OverlapKind::at_least}) {
        for (std::size_t t = spec.t_count(); t >= 1; --t) {
            const OverlapFeature f{kind, t};
            rows.push_back(inference_row(spec, f, observed.count(f), config));
        }
    }
    return rows;
}

/// Fills exact P(X >= NOESS) for every row from the terminal states of the exact engine.
inline void attach_exact_tails(std::vector<InferenceRow>& rows, const TerminalStates& terminal) {
    for (auto& row : rows) {
        row.exact_tail = terminal.distribution(row.feature).upper_tail(row.noess);
    }
}

}  // namespace ghgd

#endif  // GHGD_INFERENCE_HPP
