#include <gtest/gtest.h>

#include <random>

#include "ghgd/distribution.hpp"
#include "ghgd/moments.hpp"
#include "oracle.hpp"

using namespace ghgd;

namespace {

const ProblemSpec& genome_example() {
    static const ProblemSpec spec(19815, {127, 110, 87, 110});
    return spec;
}

Rational q(const char* text) { return Rational(text); }

}  // namespace

TEST(ExpectationFull, Examples) {
    EXPECT_EQ(expectation_full(genome_example()), q("1782572/103733962245"));
    EXPECT_EQ(to_decimal(expectation_full(genome_example())), "0.000017");
    EXPECT_EQ(expectation_full(ProblemSpec(7, {7, 7, 7})), 7);
    EXPECT_EQ(expectation_full(ProblemSpec(5, {2, 2})), Rational(4, 5));
    EXPECT_THROW(expectation_full(ProblemSpec(0, {0, 0})), domain_error);
}

TEST(RawMomentsFull, ClassicalExample) {
    const auto raw = raw_moments_full(ProblemSpec(5, {2, 2}), 2);
    ASSERT_EQ(raw.size(), 3u);
    EXPECT_EQ(raw[0], 1);
    EXPECT_EQ(raw[1], Rational(4, 5));
    EXPECT_EQ(raw[2], 1);
    EXPECT_EQ(raw_moments_full(genome_example(), 0), std::vector<ExactRatio>{ExactRatio(1)});
}

TEST(RawMomentsFull, MatchesExactDistribution) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t n = 1 + rng() % 12;
        const ProblemSpec spec(n, oracle::random_sizes(rng, 1 + trial % 4, n));
        const auto raw = raw_moments_full(spec, 5);
        const auto d = exact_distribution(spec, exactly(spec.t_count()));
        for (unsigned v = 0; v <= 5; ++v) ASSERT_EQ(raw[v], d.raw_moment(v)) << trial << " v=" << v;
    }
}

TEST(CentralMomentsFull, LowOrders) {
    const auto central = central_moments_full(ProblemSpec(5, {2, 2}), 3);
    EXPECT_EQ(central[0], 1);
    EXPECT_EQ(central[1], 0);
    EXPECT_EQ(central[2], Rational(9, 25));
    const auto d = exact_distribution(ProblemSpec(5, {2, 2}), exactly(2));
    const Rational mu = d.mean();
    Rational third(0);
    for (const auto& [k, c] : d.counts) {
        const Rational dev = Rational(k) - mu;
        third += dev * dev * dev * d.pmf(k);
    }
    EXPECT_EQ(central[3], third);
}

TEST(VarianceFull, Examples) {
    EXPECT_EQ(variance_full(ProblemSpec(5, {2, 2})), Rational(9, 25));
    EXPECT_EQ(to_decimal(variance_full(genome_example())), "0.000017");
    EXPECT_EQ(variance_full(genome_example()), q("179801893439617505211431255738/10463293851112094286122922504561075"));
    EXPECT_EQ(variance_full(ProblemSpec(9, {0, 4, 5})), 0);
    EXPECT_EQ(variance_full(ProblemSpec(6, {6, 6})), 0);
}

TEST(VarianceFull, EqualsSecondCentralMoment) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t n = 1 + rng() % 500;
        const ProblemSpec spec(n, oracle::random_sizes(rng, 1 + trial % 6, n));
        ASSERT_EQ(variance_full(spec), central_moments_full(spec, 2)[2]);
    }
}

TEST(ExpectationPartial, GenomeExampleMeans) {
    struct Row { OverlapFeature f; const char* decimal; const char* exact; };
    const Row rows[] = {
        {exactly(4), "0.000017", "1782572/103733962245"},
        {exactly(3), "0.012717", "439733756/34577987415"},
        {exactly(2), "3.505980", "121229717977/34577987415"},
        {exactly(1), "426.949821", "44289196572376/103733962245"},
        {at_least(4), "0.000017", "1782572/103733962245"},
        {at_least(3), "0.012734", "264196768/20746792449"},
        {at_least(2), "3.518714", "365010137771/103733962245"},
        {at_least(1), "430.468535", "14884735570049/34577987415"},
    };
    for (const auto& r : rows) {
        const auto mean = expectation_partial(genome_example(), r.f);
        EXPECT_EQ(to_decimal(mean), r.decimal) << r.f.label();
        EXPECT_EQ(mean, q(r.exact)) << r.f.label();
    }
}

TEST(ExpectationPartial, ZeroLevelByComplement) {
    const auto& spec = genome_example();
    EXPECT_EQ(expectation_partial(spec, at_least(0)), 19815);
    Rational sum(0);
    for (std::size_t t = 0; t <= 4; ++t) sum += expectation_partial(spec, exactly(t));
    EXPECT_EQ(sum, 19815);
    const auto d = exact_distribution(ProblemSpec(7, {3, 2, 4}), exactly(0));
    EXPECT_EQ(expectation_partial(ProblemSpec(7, {3, 2, 4}), exactly(0)), d.mean());
}

TEST(ExpectationPartial, DecompositionIdentities) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t n = 1 + rng() % 100000;
        const ProblemSpec spec(n, oracle::random_sizes(rng, 1 + trial % 7, n));
        const std::size_t t_count = spec.t_count();
        Rational total(0);
        for (std::size_t t = 0; t <= t_count; ++t) total += expectation_partial(spec, exactly(t));
        ASSERT_EQ(total, Rational(n));
        for (std::size_t t = 0; t <= t_count; ++t) {
            Rational tail(0);
            for (std::size_t u = t; u <= t_count; ++u) tail += expectation_partial(spec, exactly(u));
            ASSERT_EQ(expectation_partial(spec, at_least(t)), tail);
        }
        ASSERT_EQ(expectation_partial(spec, at_least(t_count)), expectation_full(spec));
    }
}

TEST(IndicatorMoments, GenomeExampleVariances) {
    struct Row { OverlapFeature f; const char* decimal; };
    const Row rows[] = {
        {exactly(2), "3.393887"}, {at_least(2), "3.405393"}, {at_least(1), "3.442445"},
        {at_least(3), "0.012731"}, {exactly(3), "0.012714"}, {exactly(1), "13.682894"},
        {exactly(4), "0.000017"}, {at_least(4), "0.000017"},
    };
    for (const auto& r : rows) {
        EXPECT_EQ(to_decimal(indicator_moments(genome_example(), r.f).variance), r.decimal) << r.f.label();
    }
    EXPECT_EQ(indicator_moments(genome_example(), exactly(2)).variance,
              q("438410306673734622905533119382362/129176467297680176371887932155075"));
}

TEST(IndicatorMoments, ClassicalExample) {
    const auto s = indicator_moments(ProblemSpec(5, {2, 2}), exactly(2));
    EXPECT_EQ(s.mean, Rational(4, 5));
    EXPECT_EQ(s.variance, Rational(9, 25));
    EXPECT_EQ(s.raw_moments[0], 1);
    EXPECT_EQ(s.central_moments[1], 0);
}

TEST(IndicatorMoments, PatternBudget) {
    const ProblemSpec spec(50, std::vector<std::uint64_t>(17, 3));
    EXPECT_THROW(indicator_moments(spec, exactly(2)), budget_exceeded);
    IndicatorConfig wide;
    wide.pattern_budget = 20;
    EXPECT_NO_THROW(indicator_moments(spec, exactly(2), wide));
}

TEST(IndicatorMoments, AgreesWithResultOneAndFullOverlap) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t n = 1 + rng() % 1'000'000;
        const ProblemSpec spec(n, oracle::random_sizes(rng, 1 + trial % 7, std::min<std::uint64_t>(n, 5000)));
        for (std::size_t t = 0; t <= spec.t_count(); ++t) {
            for (auto f : {exactly(t), at_least(t)}) {
                ASSERT_EQ(indicator_moments(spec, f).mean, expectation_partial(spec, f)) << f.label();
            }
        }
        ASSERT_EQ(indicator_moments(spec, at_least(spec.t_count())).variance, variance_full(spec));
    }
}

TEST(IndicatorMoments, AgreesWithExactDistributions) {
    for (std::uint64_t n = 1; n <= 6; ++n) {
        for (std::uint64_t a = 0; a <= n; ++a) {
            for (std::uint64_t b = 0; b <= n; ++b) {
                const ProblemSpec spec(n, {a, b, (a + b) % (n + 1)});
                const auto terminal = terminal_states(spec);
                for (std::size_t t = 0; t <= 3; ++t) {
                    for (auto f : {exactly(t), at_least(t)}) {
                        const auto d = terminal.distribution(f);
                        const auto s = indicator_moments(spec, f);
                        ASSERT_EQ(s.mean, d.mean());
                        ASSERT_EQ(s.variance, d.variance());
                    }
                }
            }
        }
    }
}

TEST(SecondMomentEqualSizes, TwoSubsetCollapse) {
    for (std::uint64_t n = 2; n <= 40; ++n) {
        for (std::uint64_t m = 0; m <= n; ++m) {
            const Rational expected(BigInt(m * m) * ((m == 0 ? 0 : m - 1) * (m == 0 ? 0 : m - 1)), BigInt(n * (n - 1)));
            ASSERT_EQ(second_moment_equalM_closed(n, m, 2, 2), expected) << n << " " << m;
        }
    }
}

TEST(SecondMomentEqualSizes, Examples) {
    const auto s = indicator_moments(ProblemSpec(20, {5, 5, 5}), exactly(2));
    EXPECT_EQ(second_moment_equalM_closed(20, 5, 3, 2), s.raw_moments[2] - s.mean);
    EXPECT_EQ(second_moment_equalM_closed(20, 5, 3, 2), Rational(4635, 722));

    const auto d = exact_distribution(ProblemSpec(10, {3, 3, 3, 3}), exactly(1));
    EXPECT_EQ(second_moment_equalM_closed(10, 3, 4, 1), d.raw_moment(2) - d.raw_moment(1));
    EXPECT_EQ(second_moment_equalM_closed(10, 3, 4, 1), Rational(686, 45));
}

TEST(SecondMomentEqualSizes, MatchesIndicatorOracle) {
    for (std::uint64_t n = 2; n <= 30; n += 2) {
        for (std::size_t t_count = 1; t_count <= 5; ++t_count) {
            for (std::uint64_t m = 0; m <= n; m += 3) {
                const ProblemSpec spec(n, std::vector<std::uint64_t>(t_count, m));
                for (std::size_t t = 1; t <= t_count; ++t) {
                    const auto s = indicator_moments(spec, exactly(t));
                    ASSERT_EQ(second_moment_equalM_closed(n, m, t_count, t), s.raw_moments[2] - s.mean)
                        << n << " " << m << " " << t_count << " " << t;
                }
            }
        }
    }
}

TEST(SecondMomentEqualSizes, Preconditions) {
    EXPECT_THROW(second_moment_equalM_closed(10, 3, 4, 0), domain_error);
    EXPECT_THROW(second_moment_equalM_closed(10, 3, 4, 5), domain_error);
    EXPECT_THROW(second_moment_equalM_closed(1, 1, 2, 1), domain_error);
    EXPECT_THROW(second_moment_equalM_closed(5, 6, 2, 1), domain_error);
}

TEST(Summary, FromDistributionMatchesClosedForms) {
    const ProblemSpec spec(8, {3, 4, 2});
    const auto from_dist = summary_from_distribution(exact_distribution(spec, exactly(3)), 4);
    const auto closed = summary_full(spec, 4);
    EXPECT_EQ(from_dist.raw_moments, closed.raw_moments);
    EXPECT_EQ(from_dist.central_moments, closed.central_moments);
    EXPECT_EQ(closed.variance, variance_full(spec));
    EXPECT_GE(closed.variance, 0);
}
