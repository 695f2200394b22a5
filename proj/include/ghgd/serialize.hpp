#ifndef GHGD_SERIALIZE_HPP
#define GHGD_SERIALIZE_HPP

// JSON, TSV and text renderings of distributions, samples, statistics and
// inference reports. Big integers and exact rationals are written as decimal
// strings; derived floating-point values are rounded to 6 decimals.

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ghgd/distribution.hpp"
#include "ghgd/error.hpp"
#include "ghgd/exact.hpp"
#include "ghgd/inference.hpp"
#include "ghgd/moments.hpp"
#include "ghgd/problem.hpp"
#include "ghgd/sampler.hpp"
#include "ghgd/version.hpp"

namespace ghgd {

using json = nlohmann::ordered_json;

inline std::string fixed(double x, int places = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, x);
    return buf;
}

inline double round6(double x) { return std::round(x * 1e6) / 1e6; }

/// "86.75%", "75%", "100%".
inline std::string percent(double fraction) {
    std::string s = fixed(fraction * 100.0, 2);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s + "%";
}

inline json feature_json(const OverlapFeature& f) {
    return json{{"kind", kind_name(f.kind)}, {"t", f.t}};
}

inline OverlapFeature feature_from_json(const json& j) {
    OverlapFeature f;
    f.kind = parse_kind(j.at("kind").get<std::string>());
    f.t = j.at("t").get<std::size_t>();
    return f;
}

inline json ratio_json(const ExactRatio& q, int places = 6) {
    return json{{"exact", to_fraction_string(q)}, {"decimal", to_decimal(q, places)}};
}

// ---- distributions ---------------------------------------------------------

inline json to_json(const ExactOverlapDistribution& d) {
    json counts = json::object();
    for (const auto& [k, c] : d.counts) counts[std::to_string(k)] = c.str();
    return json{{"n", d.spec.n()},
                {"m", d.spec.sizes().vector()},
                {"feature", feature_json(d.feature)},
                {"normalizer", d.normalizer.str()},
                {"counts", std::move(counts)}};
}

inline ExactOverlapDistribution distribution_from_json(const json& j) {
    try {
        ProblemSpec spec(j.at("n").get<std::uint64_t>(), j.at("m").get<std::vector<std::uint64_t>>());
        OverlapFeature feature = feature_from_json(j.at("feature"));
        feature.validate(spec.t_count());
        ExactOverlapDistribution d{spec, feature, {}, parse_bigint(j.at("normalizer").get<std::string>())};
        for (const auto& [key, value] : j.at("counts").items()) {
            const BigInt k = parse_bigint(key);
            if (k < 0 || k > spec.n()) throw domain_error("count key " + key + " outside 0..N");
            d.counts.emplace(k.convert_to<std::uint64_t>(), parse_bigint(value.get<std::string>()));
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("malformed distribution document: ") + e.what());
    }
}

// ---- samples ---------------------------------------------------------------

inline json to_json(const SampleReport& r) {
    json counts = json::object();
    for (const auto& [k, c] : r.histogram) counts[std::to_string(k)] = std::to_string(c);
    return json{{"n", r.spec.n()},
                {"m", r.spec.sizes().vector()},
                {"feature", feature_json(r.feature)},
                {"normalizer", std::to_string(r.draws)},
                {"counts", std::move(counts)},
                {"draws", r.draws},
                {"seed", r.seed},
                {"workers", r.workers},
                {"empirical_mean", round6(r.empirical_mean)},
                {"empirical_variance", round6(r.empirical_variance)}};
}

// ---- statistics ------------------------------------------------------------

inline json to_json(const SummaryStatistics& s) {
    json raw = json::array(), central = json::array();
    for (const auto& q : s.raw_moments) raw.push_back(ratio_json(q));
    for (const auto& q : s.central_moments) central.push_back(ratio_json(q));
    return json{{"mean", ratio_json(s.mean)},
                {"variance", ratio_json(s.variance)},
                {"raw_moments", std::move(raw)},
                {"central_moments", std::move(central)}};
}

// ---- inference reports -----------------------------------------------------

struct ReportContext {
    ProblemSpec spec;
    LOHistogram observed;
    InferenceConfig config;
    std::vector<std::string> notes;
};

inline std::string row_label(const OverlapFeature& f) {
    return std::string("p(k, t") + (f.kind == OverlapKind::exactly ? "=" : ">=") + std::to_string(f.t) + ")";
}

inline std::string bound_display(const TailBound& b) {
    if (!b.value) return "n/a";
    std::string s = "< " + fixed(b.clamped());
    if (b.direction == Direction::below) s += " (below mean)";
    return s;
}

/// Two decimals, three when the whole interval lies below 1.
inline std::string interval_display(const Interval& iv) {
    const int places = iv.upper < 1.0 ? 3 : 2;
    const std::string lower = iv.lower == 0.0 ? "0" : fixed(iv.lower, places);
    return "[" + lower + ", " + fixed(iv.upper, places) + "]";
}

inline std::string hits_display(const HitStatistics& h) {
    if (!h.shn) return "n/a";
    return std::to_string(*h.shn) + " (" + percent(*h.shr) + ")";
}

inline std::vector<std::string> standard_notes(const InferenceConfig& config) {
    std::vector<std::string> notes;
    notes.push_back("Tail bounds are for the deviation |X - mu| >= |NOESS - mu|; "
                    "'below mean' marks an observation under the expectation.");
    notes.push_back("Unimodal bound uses s = " + fixed(config.mode_gap_s, 3) +
                    " for |mean - mode|; the smaller applicable bound is shown.");
    notes.push_back("Credibility interval: mu -/+ sigma/sqrt(alpha), alpha = " + fixed(config.alpha, 4) + ".");
    if (config.z_min_rule == ZMinRule::floor_of_interval) {
        notes.push_back("Z_min rule floor_of_interval: floor(mu + sigma/sqrt(alpha)). The strict rule "
                        "(smallest Z with sigma^2/(Z-mu)^2 < alpha) can be one larger.");
    } else {
        notes.push_back("Z_min rule strict_ceil: smallest integer Z > mu with sigma^2/(Z-mu)^2 < alpha.");
    }
    return notes;
}

inline std::string sizes_display(const SubsetSizes& m) {
    std::string s = "{";
    for (std::size_t i = 0; i < m.t_count(); ++i) {
        if (i) s += ", ";
        s += std::to_string(m[i]);
    }
    return s + "}";
}

inline std::string render_text(const ReportContext& ctx, const std::vector<InferenceRow>& rows) {
    const bool exact = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.exact_tail.has_value(); });
    const bool sampled = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.sampled_tail.has_value(); });
    std::ostringstream out;
    out << "Distribution analysis for N=" << ctx.spec.n() << ", M=" << sizes_display(ctx.spec.sizes()) << "\n\n";

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header{"Distribution", "Mean", "Variance", "NOESS", "p(|X-mu|>=|NOESS-mu|)",
                                    "p(X>=1)", "Credibility interval", "SHN (SHR)"};
    if (exact) header.push_back("exact P(X>=NOESS)");
    if (sampled) header.push_back("sampled P(X>=NOESS)");
    table.push_back(header);
    for (const auto& r : rows) {
        std::vector<std::string> line{row_label(r.feature), to_decimal(r.mean), to_decimal(r.variance),
                                      std::to_string(r.noess), bound_display(r.p_hit),
                                      bound_display(r.p_all_hit), interval_display(r.interval),
                                      hits_display(r.hits)};
        if (exact) line.push_back(r.exact_tail ? to_decimal(*r.exact_tail) : "n/a");
        if (sampled) line.push_back(r.sampled_tail ? fixed(*r.sampled_tail) : "n/a");
        table.push_back(std::move(line));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    }
    for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(width[c])) << line[c];
            out << (c + 1 < line.size() ? "  " : "\n");
        }
    }
    out << "\n";
    for (const auto& note : ctx.notes) out << "note: " << note << "\n";
    return out.str();
}

inline std::string render_tsv(const ReportContext& ctx, const std::vector<InferenceRow>& rows) {
    (void)ctx;
    std::ostringstream out;
    out << "kind\tt\tmean\tvariance\tnoess\tp_hit\tp_hit_form\tdirection\tp_all_hit\tp_all_hit_form"
           "\tci_lower\tci_upper\tz_min\tshn\tshr\texact_tail\tsampled_tail\n";
    for (const auto& r : rows) {
        out << kind_name(r.feature.kind) << '\t' << r.feature.t << '\t' << to_decimal(r.mean) << '\t'
            << to_decimal(r.variance) << '\t' << r.noess << '\t'
            << (r.p_hit.value ? fixed(r.p_hit.clamped()) : "NA") << '\t' << bound_form_name(r.p_hit.form) << '\t'
            << (r.p_hit.direction == Direction::below ? "below" : "above") << '\t'
            << (r.p_all_hit.value ? fixed(r.p_all_hit.clamped()) : "NA") << '\t'
            << bound_form_name(r.p_all_hit.form) << '\t' << fixed(r.interval.lower) << '\t'
            << fixed(r.interval.upper) << '\t' << r.hits.z_min << '\t'
            << (r.hits.shn ? std::to_string(*r.hits.shn) : "NA") << '\t'
            << (r.hits.shr ? fixed(*r.hits.shr) : "NA") << '\t'
            << (r.exact_tail ? to_decimal(*r.exact_tail) : "NA") << '\t'
            << (r.sampled_tail ? fixed(*r.sampled_tail) : "NA") << '\n';
    }
    return out.str();
}

inline json bound_json(const TailBound& b) {
    if (!b.value) return json{{"applicable", false}, {"display", "n/a"}};
    return json{{"applicable", true},
                {"value", round6(b.clamped())},
                {"raw", *b.value},
                {"form", bound_form_name(b.form)},
                {"direction", b.direction == Direction::below ? "below" : "above"},
                {"display", bound_display(b)}};
}

inline json to_json(const ReportContext& ctx, const std::vector<InferenceRow>& rows) {
    json out_rows = json::array();
    for (const auto& r : rows) {
        json row{{"feature", feature_json(r.feature)},
                 {"label", row_label(r.feature)},
                 {"mean", ratio_json(r.mean)},
                 {"variance", ratio_json(r.variance)},
                 {"noess", r.noess},
                 {"p_hit", bound_json(r.p_hit)},
                 {"p_all_hit", bound_json(r.p_all_hit)},
                 {"interval", {{"lower", round6(r.interval.lower)}, {"upper", round6(r.interval.upper)}}},
                 {"z_min", r.hits.z_min},
                 {"shn", r.hits.shn ? json(*r.hits.shn) : json("n/a")},
                 {"shr", r.hits.shr ? json(round6(*r.hits.shr)) : json("n/a")}};
        if (r.exact_tail) row["exact_tail"] = ratio_json(*r.exact_tail);
        if (r.sampled_tail) row["sampled_tail"] = round6(*r.sampled_tail);
        out_rows.push_back(std::move(row));
    }
    return json{{"tool", "ghgd"},
                {"version", std::string(version)},
                {"parameters",
                 {{"n", ctx.spec.n()},
                  {"m", ctx.spec.sizes().vector()},
                  {"alpha", ctx.config.alpha},
                  {"mode_gap_s", ctx.config.mode_gap_s},
                  {"z_min_rule", zmin_rule_name(ctx.config.z_min_rule)}}},
                {"observed", ctx.observed.counts},
                {"rows", std::move(out_rows)},
                {"notes", ctx.notes}};
}

}  // namespace ghgd

#endif  // GHGD_SERIALIZE_HPP
