#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ghgd/distribution.hpp"
#include "oracle.hpp"

using namespace ghgd;

namespace {

std::map<std::uint64_t, BigCount> counts(std::initializer_list<std::pair<const std::uint64_t, int>> init) {
    std::map<std::uint64_t, BigCount> out;
    for (const auto& [k, c] : init) out.emplace(k, BigCount(c));
    return out;
}

}  // namespace

TEST(TotalSelections, Examples) {
    EXPECT_EQ(total_selections(ProblemSpec(5, {2, 2})), 100);
    EXPECT_EQ(total_selections(ProblemSpec(4, {2, 2})), 36);
    EXPECT_EQ(total_selections(ProblemSpec(17, {17})), 1);
}

TEST(ProblemSpec, RejectsOversizedSubset) {
    EXPECT_THROW(ProblemSpec(3, {2, 4}), domain_error);
    EXPECT_THROW(ProblemSpec(3, std::vector<std::uint64_t>{}), domain_error);
}

TEST(CountFullOverlap, ClassicalCase) {
    const ProblemSpec spec(5, {2, 2});
    EXPECT_EQ(count_full_overlap(spec, 0), 30);
    EXPECT_EQ(count_full_overlap(spec, 1), 60);
    EXPECT_EQ(count_full_overlap(spec, 2), 10);
    EXPECT_EQ(count_full_overlap(spec, 3), 0);
    EXPECT_THROW(count_full_overlap(spec, 6), domain_error);
}

TEST(CountFullOverlap, ThreeSubsetsAgainstEnumeration) {
    const ProblemSpec spec(4, {2, 2, 2});
    // exhaustive sweep of all 216 triples
    EXPECT_EQ(count_full_overlap(spec, 2), 6);
    const auto oracle = enumerate_oracle(spec, exactly(3));
    for (std::uint64_t k = 0; k <= 2; ++k) EXPECT_EQ(count_full_overlap(spec, k), oracle.count(k));
    EXPECT_EQ(Rational(oracle.raw_moment(1)), Rational(1, 2));
}

TEST(CountFullOverlap, TopTermIsClosedForm) {
    for (const auto& spec : {ProblemSpec(9, {4, 6, 5}), ProblemSpec(12, {3, 7}), ProblemSpec(6, {6, 6, 6})}) {
        const auto k = spec.m_min();
        BigCount expected = binom(spec.n(), static_cast<std::int64_t>(k));
        for (auto m : spec.sizes()) expected *= binom(spec.n() - k, static_cast<std::int64_t>(m - k));
        EXPECT_EQ(count_full_overlap(spec, k), expected);
    }
}

TEST(ExactDistribution, ClassicalExamples) {
    const ProblemSpec spec(4, {2, 2});
    const auto d2 = exact_distribution(spec, exactly(2));
    EXPECT_EQ(d2.counts, counts({{0, 6}, {1, 24}, {2, 6}}));
    EXPECT_EQ(d2.normalizer, 36);

    EXPECT_EQ(exact_distribution(spec, exactly(1)).counts, counts({{0, 6}, {2, 24}, {4, 6}}));
    EXPECT_EQ(exact_distribution(spec, at_least(0)).counts, counts({{4, 36}}));
    EXPECT_THROW(exact_distribution(spec, exactly(3)), domain_error);
}

TEST(ExactDistribution, SingleSubset) {
    const ProblemSpec spec(5, {3});
    EXPECT_EQ(exact_distribution(spec, exactly(1)).counts, counts({{3, 10}}));
    EXPECT_EQ(exact_distribution(spec, exactly(0)).counts, counts({{2, 10}}));
}

TEST(ExactDistribution, EmptyAndFullSubsets) {
    EXPECT_EQ(exact_distribution(ProblemSpec(6, {0, 3}), exactly(2)).counts, counts({{0, 20}}));
    EXPECT_EQ(exact_distribution(ProblemSpec(6, {6, 3}), exactly(2)).counts, counts({{3, 20}}));
    EXPECT_EQ(exact_distribution(ProblemSpec(0, {0, 0}), exactly(0)).counts, counts({{0, 1}}));
}

TEST(ExactDistribution, MatchesOracleOnSmallGrid) {
    for (std::uint64_t n = 0; n <= 5; ++n) {
        for (std::uint64_t a = 0; a <= n; ++a) {
            for (std::uint64_t b = 0; b <= n; ++b) {
                for (std::uint64_t c = 0; c <= n; ++c) {
                    const ProblemSpec spec(n, {a, b, c});
                    for (std::size_t t = 0; t <= 3; ++t) {
                        for (auto f : {exactly(t), at_least(t)}) {
                            ASSERT_EQ(exact_distribution(spec, f).counts, enumerate_oracle(spec, f).counts)
                                << n << " {" << a << "," << b << "," << c << "} " << f.label();
                        }
                    }
                }
            }
        }
    }
}

TEST(ExactDistribution, OrderInvariant) {
    std::vector<std::uint64_t> m{5, 2, 7, 3};
    const auto reference = terminal_states(ProblemSpec(10, m));
    std::sort(m.begin(), m.end());
    do {
        const ProblemSpec spec(10, m);
        for (std::size_t t = 0; t <= 4; ++t) {
            ASSERT_EQ(exact_distribution(spec, exactly(t)).counts, reference.distribution(exactly(t)).counts);
        }
    } while (std::next_permutation(m.begin(), m.end()));
}

TEST(ExactDistribution, WorkerCountDoesNotChangeResult) {
    const ProblemSpec spec(30, {9, 8, 7, 6});
    DistributionConfig serial, parallel;
    parallel.workers = 3;
    for (std::size_t t = 0; t <= 4; ++t) {
        for (auto f : {exactly(t), at_least(t)}) {
            EXPECT_EQ(exact_distribution(spec, f, serial).counts, exact_distribution(spec, f, parallel).counts);
        }
    }
}

TEST(ExactDistribution, StateBudgetIsACleanError) {
    DistributionConfig tight;
    tight.state_budget = 10;
    try {
        exact_distribution(ProblemSpec(30, {9, 8, 7, 6}), exactly(2), tight);
        FAIL() << "expected budget_exceeded";
    } catch (const budget_exceeded& e) {
        EXPECT_GT(e.reached(), 10u);
    }
}

TEST(ExactDistribution, NormalizationAndFullOverlapAgreement) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint64_t n = 1 + rng() % 14;
        const auto m = oracle::random_sizes(rng, 1 + trial % 4, n);
        const ProblemSpec spec(n, m);
        const auto terminal = terminal_states(spec);
        const auto full = full_overlap_counts(spec);
        const auto eq = terminal.distribution(exactly(spec.t_count()));
        const auto ge = terminal.distribution(at_least(spec.t_count()));
        ASSERT_EQ(eq.counts, ge.counts);
        for (std::uint64_t k = 0; k <= n; ++k) ASSERT_EQ(eq.count(k), k < full.size() ? full[k] : BigCount(0));
        for (std::size_t t = 0; t <= spec.t_count(); ++t) {
            ASSERT_EQ(terminal.distribution(exactly(t)).counted_total(), total_selections(spec));
        }
    }
}

TEST(ExactDistribution, ClassicalHypergeometricReduction) {
    for (std::uint64_t n = 1; n <= 24; n += 3) {
        for (std::uint64_t a = 0; a <= n; a += 2) {
            for (std::uint64_t b = 0; b <= n; b += 3) {
                const auto d = exact_distribution(ProblemSpec(n, {a, b}), exactly(2));
                for (std::uint64_t k = 0; k <= n; ++k) ASSERT_EQ(d.pmf(k), oracle::classical_hgd(n, a, b, k));
            }
        }
    }
}

TEST(EnumerateOracle, ClassicalExample) {
    EXPECT_EQ(enumerate_oracle(ProblemSpec(5, {2, 2}), exactly(2)).counts, counts({{0, 30}, {1, 60}, {2, 10}}));
}

TEST(EnumerateOracle, RefusesOverBudget) {
    try {
        enumerate_oracle(ProblemSpec(40, {20, 20}), exactly(2));
        FAIL() << "expected budget_exceeded";
    } catch (const budget_exceeded& e) {
        EXPECT_GT(e.reached(), 10'000'000u);
    }
}

TEST(ReductionIdentity, Examples) {
    EXPECT_TRUE(reduction_identity_check(ProblemSpec(5, {2, 2}), 1));
    EXPECT_TRUE(reduction_identity_check(ProblemSpec(5, {2, 2}), 2));
    EXPECT_EQ(count_full_overlap(ProblemSpec(4, {1, 1}), 0), 12);
    EXPECT_THROW(reduction_identity_check(ProblemSpec(5, {0, 2}), 1), domain_error);
    EXPECT_THROW(reduction_identity_check(ProblemSpec(5, {2, 2}), 0), domain_error);
    EXPECT_THROW(reduction_identity_check(ProblemSpec(5, {2, 2}), 3), domain_error);
}

TEST(ReductionIdentity, HoldsAcrossSpecs) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t n = 2 + rng() % 30;
        auto m = oracle::random_sizes(rng, 1 + trial % 5, n);
        for (auto& x : m) x = std::max<std::uint64_t>(x, 1);
        const ProblemSpec spec(n, m);
        for (std::uint64_t k = 1; k <= spec.m_min(); ++k) ASSERT_TRUE(reduction_identity_check(spec, k));
    }
}

TEST(DistributionShape, ModeAndUnimodality) {
    const auto d = exact_distribution(ProblemSpec(20, {8, 9, 10}), at_least(2));
    EXPECT_TRUE(d.is_unimodal());
    const double mean = to_double(d.mean());
    EXPECT_LT(std::abs(mean - static_cast<double>(d.mode())), 1.0);

    ExactOverlapDistribution bimodal{ProblemSpec(4, {2, 2}), exactly(1), counts({{0, 5}, {1, 1}, {2, 5}}), 11};
    EXPECT_FALSE(bimodal.is_unimodal());
    EXPECT_EQ(bimodal.mode(), 0u);
}

TEST(DistributionTails, UpperAndLower) {
    const auto d = exact_distribution(ProblemSpec(5, {2, 2}), exactly(2));
    EXPECT_EQ(d.upper_tail(1), Rational(7, 10));
    EXPECT_EQ(d.lower_tail(0), Rational(3, 10));
    EXPECT_EQ(d.upper_tail(3), 0);
    EXPECT_EQ(d.pmf(4), 0);
}
