#include <gtest/gtest.h>

#include <sstream>

#include "nre/core/rng.hpp"
#include "nre/error.hpp"
#include "nre/metrics/metrics.hpp"
#include "nre/metrics/round_report.hpp"
#include "nre/recsys/training.hpp"
#include "support/oracles.hpp"

namespace nre::metrics {
namespace {

TEST(Gini, MatchesPairwiseOracle) {
    RngStream rng(1, "gini");
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.uniform_index(200);
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform() < 0.3 ? 0.0 : static_cast<double>(rng.uniform_index(50));
        EXPECT_NEAR(gini(x), oracle::gini(x), 1e-9);
    }
}

TEST(Gini, KnownValuesAndErrors) {
    EXPECT_EQ(gini(std::vector<double>{3, 3, 3, 3}), 0.0);
    EXPECT_NEAR(gini(std::vector<double>{0, 0, 0, 1}), 0.75, 1e-12);
    EXPECT_EQ(gini(std::vector<double>{5}), 0.0);
    EXPECT_EQ(gini(std::vector<double>{0, 0}), 0.0);
    EXPECT_THROW(gini(std::vector<double>{1, -1}), DegenerateInputError);
    EXPECT_THROW(gini(std::vector<double>{}), DegenerateInputError);
    const std::vector<double> x{1, 4, 0, 2, 9}, y{7, 28, 0, 14, 63};
    EXPECT_NEAR(gini(x), gini(y), 1e-12);
}

TEST(Jaccard, PairsAndHomogenization) {
    EXPECT_NEAR(jaccard_index(std::vector<NewsId>{1, 2}, std::vector<NewsId>{2, 3}), 1.0 / 3.0, 1e-12);
    EXPECT_EQ(jaccard_index(std::vector<NewsId>{1}, std::vector<NewsId>{2}), 0.0);
    EXPECT_EQ(jaccard_index(std::vector<NewsId>{}, std::vector<NewsId>{}), 0.0);

    RngStream rng(2, "jac");
    for (int t = 0; t < 100; ++t) {
        std::vector<std::vector<NewsId>> sets(2 + rng.uniform_index(20));
        std::vector<std::vector<unsigned>> plain;
        for (auto& s : sets) {
            for (NewsId n = 0; n < 15; ++n)
                if (rng.uniform() < 0.3) s.push_back(n);
            if (!s.empty()) plain.emplace_back(s.begin(), s.end());
        }
        RngStream jr(3, "j");
        const auto got = jaccard_homogenization(sets, 100000, jr);
        if (plain.size() < 2) {
            EXPECT_FALSE(got.has_value());
        } else {
            ASSERT_TRUE(got.has_value());
            EXPECT_NEAR(*got, oracle::mean_pairwise_jaccard(plain), 1e-9);
        }
    }
}

TEST(Jaccard, SampledModeConverges) {
    RngStream gen(4, "fixture");
    std::vector<std::vector<NewsId>> sets(500);
    std::vector<std::vector<unsigned>> plain;
    for (auto& s : sets) {
        for (NewsId n = 0; n < 60; ++n)
            if (gen.uniform() < 0.1 + 0.2 * (n % 3 == 0)) s.push_back(n);
        if (s.empty()) s.push_back(0);
        plain.emplace_back(s.begin(), s.end());
    }
    RngStream rng(5, "sample");
    const auto sampled = jaccard_homogenization(sets, 100000, rng);  // 124750 pairs > budget
    ASSERT_TRUE(sampled.has_value());
    EXPECT_NEAR(*sampled, oracle::mean_pairwise_jaccard(plain), 0.02);
}

TEST(Coverage, IntersectsWithActive) {
    EXPECT_EQ(coverage(nullptr, 10, std::vector<NewsId>{1, 2}).users, 0u);
    recsys::RankingModel m({0, 1, 2}, {0, 1, 2, 3}, 2);
    m.set_coverage({0, 2}, {1, 2, 3});
    const std::vector<NewsId> active{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const auto c = coverage(&m, 3, active);
    EXPECT_EQ(c.users, 2u);
    EXPECT_EQ(c.news, 2u);
}

TEST(Quality, Stats) {
    auto s = quality_stats(std::vector<double>{0, 1}, std::vector<double>{0, 5});
    EXPECT_DOUBLE_EQ(s.average, 0.5);
    EXPECT_DOUBLE_EQ(*s.like_weighted, 1.0);
    s = quality_stats(std::vector<double>{1, 3}, std::vector<double>{1, 1});
    EXPECT_DOUBLE_EQ(*s.like_weighted, 2.0);
    s = quality_stats(std::vector<double>{1, 3}, std::vector<double>{0, 0});
    EXPECT_FALSE(s.like_weighted.has_value());
    EXPECT_THROW(quality_stats(std::vector<double>{}, std::vector<double>{}), DegenerateInputError);
}

TEST(Pearson, KnownCasesAndOracle) {
    const std::vector<double> q{0, 1, 2};
    EXPECT_NEAR(*pearson(q, std::vector<double>{0, 2, 4}), 1.0, 1e-9);
    EXPECT_NEAR(*pearson(q, std::vector<double>{5, 4, 3}), -1.0, 1e-9);
    EXPECT_NEAR(*pearson(q, std::vector<double>{1, 0, 1}), 0.0, 1e-9);
    EXPECT_FALSE(pearson(q, std::vector<double>{2, 2, 2}).has_value());
    EXPECT_FALSE(pearson(std::vector<double>{1}, std::vector<double>{1}).has_value());
    RngStream rng(6, "p");
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x(30), y(30);
        for (int i = 0; i < 30; ++i) {
            x[i] = rng.normal();
            y[i] = x[i] * rng.uniform() + rng.normal();
        }
        EXPECT_NEAR(*pearson(x, y), oracle::pearson(x, y), 1e-12);
    }
}

TEST(Similarity, MeanOfCosines) {
    EXPECT_NEAR(*user_news_similarity(std::vector<double>{0.2, 0.8}), 0.5, 1e-12);
    EXPECT_FALSE(user_news_similarity(std::vector<double>{}).has_value());
}

TEST(RoundReport, CsvRoundTrip) {
    RoundReport r;
    r.round = 12;
    r.active_news = 250;
    r.total_clicks = 5000;
    r.total_likes = 731;
    r.avg_likes_per_user = 1.462;
    r.gini_users = 0.123456789;
    r.gini_news = 0.5;
    r.covered_users = 400;
    r.covered_news = 199;
    r.avg_quality = 1.25;
    r.pearson_quality_likes = -0.25;
    r.jaccard = 0.0078125;
    r.in_loop_users = 480;
    r.validation_mrr5 = 0.375;
    r.likes_by_channel = {600, 131, 0, 0, 0};
    const auto row = report_csv_row(r);
    EXPECT_EQ(parse_report_row(row), r);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), static_cast<long>(report_columns().size() - 1));
    EXPECT_EQ(report_value(r, "gini_creators"), std::nullopt);
    EXPECT_EQ(report_value(r, "total_likes"), 731.0);

    std::istringstream in(report_csv_header() + "\n" + row + "\n");
    const auto all = read_report_csv(in);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0], r);
    EXPECT_THROW(parse_report_row("1,2,3"), ParseError);
}

}  // namespace
}  // namespace nre::metrics
