// ghgd: overlap statistics for multiple element lists drawn from a finite universe.
//
//   ghgd report --universe-size N a.txt b.txt ...   inference report for observed lists
//   ghgd stats  --n N --m M0,M1,...                 exact means and variances
//   ghgd dist   --n N --m M0,M1,... --feature k:t   exact distribution
//   ghgd sample --n N --m M0,M1,... --feature k:t   Monte Carlo distribution
//
// Exit codes: 0 success, 1 usage error, 2 input validation, 3 budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghgd/ghgd.hpp"

namespace {

enum ExitCode : int { ok = 0, usage = 1, invalid_input = 2, over_budget = 3 };

struct Output {
    std::string format = "text";
    std::string path;

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out) throw ghgd::domain_error("cannot write output file '" + path + "'");
        out << text;
    }
};

void add_output_flags(CLI::App* cmd, Output& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"text", "tsv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", out.path, "Write output to this file instead of stdout");
}

std::vector<ghgd::OverlapFeature> all_features(std::size_t t_count) {
    std::vector<ghgd::OverlapFeature> out;
    for (auto kind : {ghgd::OverlapKind::exactly, ghgd::OverlapKind::at_least}) {
        for (std::size_t t = t_count; t >= 1; --t) out.push_back({kind, t});
    }
    return out;
}

bool is_full_overlap(const ghgd::OverlapFeature& f, std::size_t t_count) { return f.t == t_count; }

// ---- report ----------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> files;
    std::optional<std::uint64_t> universe_size;
    std::string universe_file;
    std::vector<std::uint64_t> sizes_override;
    double alpha = 0.05;
    double mode_gap = 1.0;
    std::string zmin_rule = "floor_of_interval";
    bool fold_case = false;
    bool exact = false;
    std::uint64_t exact_budget = 100'000'000;
    bool mc = false;
    std::uint64_t draws = 100'000;
    std::uint64_t seed = 20190101;
    unsigned workers = 1;
    Output output;
};

int run_report(const ReportArgs& a) {
    ghgd::UniverseSpec universe;
    universe.size = a.universe_size;
    if (!a.universe_file.empty()) universe.path = a.universe_file;
    const auto lists = ghgd::ingest(a.files, universe, {a.fold_case});
    for (const auto& w : lists.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<std::uint64_t> sizes = lists.sizes();
    std::vector<std::string> notes;
    if (!a.sizes_override.empty()) {
        if (a.sizes_override.size() != sizes.size()) {
            throw ghgd::domain_error("--m lists " + std::to_string(a.sizes_override.size()) +
                                     " sizes for " + std::to_string(sizes.size()) + " input lists");
        }
        notes.push_back("Null-model sizes given by --m " + ghgd::sizes_display(ghgd::SubsetSizes(a.sizes_override)) +
                        "; ingested list sizes were " + ghgd::sizes_display(ghgd::SubsetSizes(sizes)) + ".");
        sizes = a.sizes_override;
    }
    const ghgd::ProblemSpec spec(lists.universe_size, sizes);
    const auto observed = ghgd::observed_lo_counts(lists);

    ghgd::InferenceConfig config;
    config.alpha = a.alpha;
    config.mode_gap_s = a.mode_gap;
    config.z_min_rule = ghgd::parse_zmin_rule(a.zmin_rule);

    auto rows = ghgd::build_report(spec, observed, config);

    bool run_mc = a.mc;
    if (a.exact) {
        try {
            ghgd::DistributionConfig dc;
            dc.state_budget = a.exact_budget;
            dc.workers = a.workers;
            ghgd::attach_exact_tails(rows, ghgd::terminal_states(spec, dc));
            notes.push_back("Exact tails P(X >= NOESS) from the full distribution.");
        } catch (const ghgd::budget_exceeded& e) {
            if (!a.mc) {
                std::cerr << "error: " << e.what() << "; rerun with --mc for a Monte Carlo estimate\n";
                return over_budget;
            }
            notes.push_back(std::string("Exact distribution skipped: ") + e.what() + "; Monte Carlo used instead.");
            run_mc = true;
        }
    }
    if (run_mc) {
        for (auto& row : rows) {
            const auto sample = ghgd::sample_distribution(spec, row.feature, a.draws, a.seed, a.workers);
            std::uint64_t hits = 0;
            for (auto it = sample.histogram.lower_bound(row.noess); it != sample.histogram.end(); ++it) {
                hits += it->second;
            }
            row.sampled_tail = static_cast<double>(hits) / static_cast<double>(sample.draws);
        }
        notes.push_back("Sampled tails from " + std::to_string(a.draws) + " draws, seed " + std::to_string(a.seed) + ".");
    }

    ghgd::ReportContext ctx{spec, observed, config, ghgd::standard_notes(config)};
    ctx.notes.insert(ctx.notes.end(), notes.begin(), notes.end());
    if (a.output.format == "json") a.output.write(ghgd::to_json(ctx, rows).dump(2) + "\n");
    else if (a.output.format == "tsv") a.output.write(ghgd::render_tsv(ctx, rows));
    else a.output.write(ghgd::render_text(ctx, rows));
    return ok;
}

// ---- stats -----------------------------------------------------------------

struct SpecArgs {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> m;
    std::string feature;
};

void add_spec_flags(CLI::App* cmd, SpecArgs& s, bool feature_required) {
    cmd->add_option("--n", s.n, "Universe size N")->required();
    cmd->add_option("--m", s.m, "Subset sizes, comma separated")->required()->delimiter(',')->allow_extra_args(false);
    auto* f = cmd->add_option("--feature", s.feature, "Overlap feature, e.g. exactly:2 or at_least:3");
    if (feature_required) f->required();
}

int run_stats(const SpecArgs& s, unsigned v_max, const Output& output) {
    const ghgd::ProblemSpec spec(s.n, s.m);
    std::vector<ghgd::OverlapFeature> features;
    if (s.feature.empty()) features = all_features(spec.t_count());
    else features.push_back(ghgd::parse_feature(s.feature));

    ghgd::json doc{{"tool", "ghgd"},
                   {"version", std::string(ghgd::version)},
                   {"n", spec.n()},
                   {"m", spec.sizes().vector()},
                   {"features", ghgd::json::array()}};
    std::ostringstream text, tsv;
    text << "N=" << spec.n() << ", M=" << ghgd::sizes_display(spec.sizes()) << "\n";
    tsv << "kind\tt\tmean\tvariance\tmean_exact\tvariance_exact\n";
    for (const auto& f : features) {
        f.validate(spec.t_count());
        ghgd::SummaryStatistics stats;
        if (is_full_overlap(f, spec.t_count()) && spec.n() > 0) {
            stats = ghgd::summary_full(spec, v_max);
        } else {
            stats = ghgd::indicator_moments(spec, f);
            stats.mean = ghgd::expectation_partial(spec, f);
        }
        doc["features"].push_back({{"feature", ghgd::feature_json(f)}, {"statistics", ghgd::to_json(stats)}});
        text << ghgd::row_label(f) << "  mean " << ghgd::to_decimal(stats.mean) << "  variance "
             << ghgd::to_decimal(stats.variance) << "\n";
        tsv << ghgd::kind_name(f.kind) << '\t' << f.t << '\t' << ghgd::to_decimal(stats.mean) << '\t'
            << ghgd::to_decimal(stats.variance) << '\t' << ghgd::to_fraction_string(stats.mean) << '\t'
            << ghgd::to_fraction_string(stats.variance) << '\n';
        if (features.size() == 1) {
            text << "  mean (exact)     " << ghgd::to_fraction_string(stats.mean) << "\n"
                 << "  variance (exact) " << ghgd::to_fraction_string(stats.variance) << "\n";
            for (std::size_t v = 3; v < stats.raw_moments.size(); ++v) {
                text << "  E(k^" << v << ")  " << ghgd::to_decimal(stats.raw_moments[v]) << "   central "
                     << ghgd::to_decimal(stats.central_moments[v]) << "\n";
            }
        }
    }
    if (output.format == "json") output.write(doc.dump(2) + "\n");
    else if (output.format == "tsv") output.write(tsv.str());
    else output.write(text.str());
    return ok;
}

// ---- dist ------------------------------------------------------------------

int run_dist(const SpecArgs& s, std::uint64_t budget, unsigned workers, const Output& output) {
    const ghgd::ProblemSpec spec(s.n, s.m);
    const auto feature = ghgd::parse_feature(s.feature);
    ghgd::DistributionConfig dc;
    dc.state_budget = budget;
    dc.workers = workers;
    const auto dist = ghgd::exact_distribution(spec, feature, dc);
    if (output.format == "json") {
        output.write(ghgd::to_json(dist).dump(2) + "\n");
        return ok;
    }
    std::ostringstream out;
    if (output.format == "tsv") {
        out << "k\tcount\tpmf\n";
        for (const auto& [k, c] : dist.counts) out << k << '\t' << c << '\t' << ghgd::to_decimal(dist.pmf(k)) << '\n';
    } else {
        out << "N=" << spec.n() << ", M=" << ghgd::sizes_display(spec.sizes()) << ", " << feature.label() << "\n"
            << "normalizer " << dist.normalizer << "\n"
            << "mean " << ghgd::to_decimal(dist.mean()) << ", variance " << ghgd::to_decimal(dist.variance())
            << ", mode " << dist.mode() << "\n\n";
        for (const auto& [k, c] : dist.counts) {
            out << k << "  " << c << "  " << ghgd::to_decimal(dist.pmf(k)) << "\n";
        }
    }
    output.write(out.str());
    return ok;
}

// ---- sample ----------------------------------------------------------------

int run_sample(const SpecArgs& s, std::uint64_t draws, std::uint64_t seed, unsigned workers, const Output& output) {
    const ghgd::ProblemSpec spec(s.n, s.m);
    const auto feature = ghgd::parse_feature(s.feature);
    const auto report = ghgd::sample_distribution(spec, feature, draws, seed, workers);
    if (output.format == "json") {
        output.write(ghgd::to_json(report).dump(2) + "\n");
        return ok;
    }
    std::ostringstream out;
    if (output.format == "tsv") {
        out << "k\toccurrences\tfrequency\n";
        for (const auto& [k, c] : report.histogram) out << k << '\t' << c << '\t' << ghgd::fixed(report.empirical_pmf(k)) << '\n';
    } else {
        out << "N=" << spec.n() << ", M=" << ghgd::sizes_display(spec.sizes()) << ", " << feature.label() << "\n"
            << draws << " draws, seed " << seed << "\n"
            << "empirical mean " << ghgd::fixed(report.empirical_mean) << ", variance "
            << ghgd::fixed(report.empirical_variance) << "\n\n";
        for (const auto& [k, c] : report.histogram) out << k << "  " << c << "  " << ghgd::fixed(report.empirical_pmf(k)) << "\n";
    }
    output.write(out.str());
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlap statistics for multiple subsets of a finite universe", "ghgd"};
    app.set_version_flag("--version", std::string(ghgd::version));
    app.require_subcommand(1);

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Inference report for observed element lists");
    report_cmd->add_option("files", report.files, "Element list files, one identifier per line")->required()
        ->check(CLI::ExistingFile);
    auto* size_opt = report_cmd->add_option("--universe-size", report.universe_size, "Universe size N");
    auto* file_opt = report_cmd->add_option("--universe", report.universe_file, "Universe identifier file")
                         ->check(CLI::ExistingFile);
    size_opt->excludes(file_opt);
    report_cmd->add_option("--m", report.sizes_override, "Subset sizes for the null model (default: list sizes)")
        ->delimiter(',')->allow_extra_args(false);
    report_cmd->add_option("--alpha", report.alpha, "Significance level")->capture_default_str();
    report_cmd->add_option("--mode-gap", report.mode_gap, "Bound s on |mean - mode|")->capture_default_str();
    report_cmd->add_option("--zmin-rule", report.zmin_rule, "floor_of_interval or strict_ceil")
        ->check(CLI::IsMember({"floor_of_interval", "strict_ceil", "floor", "strict"}))
        ->capture_default_str();
    report_cmd->add_flag("--fold-case", report.fold_case, "Compare identifiers case-insensitively");
    report_cmd->add_flag("--exact", report.exact, "Append exact tail probabilities when within budget");
    report_cmd->add_option("--exact-budget", report.exact_budget, "State budget of the exact engine")
        ->capture_default_str();
    report_cmd->add_flag("--mc", report.mc, "Append Monte Carlo tail estimates");
    report_cmd->add_option("--draws", report.draws, "Monte Carlo draws")->capture_default_str();
    report_cmd->add_option("--seed", report.seed, "Monte Carlo seed")->capture_default_str();
    report_cmd->add_option("--workers", report.workers, "Worker threads")->capture_default_str();
    add_output_flags(report_cmd, report.output);

    SpecArgs stats_spec;
    unsigned v_max = 4;
    Output stats_out;
    auto* stats_cmd = app.add_subcommand("stats", "Exact means and variances from closed forms");
    add_spec_flags(stats_cmd, stats_spec, false);
    stats_cmd->add_option("--orders", v_max, "Highest raw moment for full-overlap features")->capture_default_str();
    add_output_flags(stats_cmd, stats_out);

    SpecArgs dist_spec;
    std::uint64_t dist_budget = 100'000'000;
    unsigned dist_workers = 1;
    Output dist_out;
    auto* dist_cmd = app.add_subcommand("dist", "Exact distribution of an overlap count");
    add_spec_flags(dist_cmd, dist_spec, true);
    dist_cmd->add_option("--exact-budget", dist_budget, "State budget of the exact engine")->capture_default_str();
    dist_cmd->add_option("--workers", dist_workers, "Worker threads")->capture_default_str();
    add_output_flags(dist_cmd, dist_out);

    SpecArgs sample_spec;
    std::uint64_t draws = 100'000;
    std::uint64_t seed = 20190101;
    unsigned sample_workers = 1;
    Output sample_out;
    auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo distribution of an overlap count");
    add_spec_flags(sample_cmd, sample_spec, true);
    sample_cmd->add_option("--draws", draws, "Number of draws")->capture_default_str();
    sample_cmd->add_option("--seed", seed, "Generator seed")->capture_default_str();
    sample_cmd->add_option("--workers", sample_workers, "Worker threads")->capture_default_str();
    add_output_flags(sample_cmd, sample_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (report_cmd->parsed()) {
            if (!report.universe_size && report.universe_file.empty()) {
                std::cerr << "error: report needs --universe-size or --universe\n";
                return usage;
            }
            return run_report(report);
        }
        if (stats_cmd->parsed()) return run_stats(stats_spec, v_max, stats_out);
        if (dist_cmd->parsed()) return run_dist(dist_spec, dist_budget, dist_workers, dist_out);
        if (sample_cmd->parsed()) return run_sample(sample_spec, draws, seed, sample_workers, sample_out);
    } catch (const ghgd::budget_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return over_budget;
    } catch (const ghgd::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid_input;
    }
    return usage;
}
