#include <gtest/gtest.h>

#include <cmath>

#include "nre/agents/creator.hpp"
#include "nre/agents/user.hpp"
#include "nre/core/math.hpp"
#include "nre/core/rng.hpp"

namespace nre::agents {
namespace {

NewsItem make_news(NewsId id, CreatorId creator, LatentVector latent, Round created = 0, Round active = 5) {
    NewsItem n;
    n.id = id;
    n.creator = creator;
    n.latent = std::move(latent);
    n.latent_norm = norm(n.latent);
    n.created_round = created;
    n.active_rounds = active;
    n.likes_by_age.assign(active, 0);
    return n;
}

TEST(CreatorSelection, WorkedExample) {
    const std::vector<double> likes{0.0, 9.0};
    const auto p = creator_selection_probabilities(0.5, likes, 0.01);
    // softmax over v = exp(-(1 - rho) / (D + eps))
    const double v0 = std::exp(-0.5 / 0.01), v1 = std::exp(-0.5 / 9.01);
    const double z = std::exp(v0) + std::exp(v1);
    EXPECT_NEAR(p[0], std::exp(v0) / z, 1e-12);
    EXPECT_NEAR(p[1], std::exp(v1) / z, 1e-12);
    EXPECT_NEAR(p[0], 0.280, 5e-4);
    EXPECT_NEAR(p[1], 0.720, 5e-4);
}

TEST(CreatorSelection, FullConcentrationIsUniform) {
    const std::vector<double> likes{0.0, 3.0, 50.0};
    for (double q : creator_selection_probabilities(1.0, likes, 1e-8)) EXPECT_NEAR(q, 1.0 / 3.0, 1e-12);
}

TEST(CreatorSelection, MoreLikesMeansHigherProbability) {
    const std::vector<double> likes{0.0, 1.0, 2.0, 7.0};
    const auto p = creator_selection_probabilities(0.3, likes, 1e-8);
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_GT(p[i], p[i - 1]);
}

TEST(CreatorSelection, AnchorsComeFromOwnNewsIncludingExpired) {
    CreatorState c;
    c.id = 0;
    c.concentration = 0.2;
    std::vector<NewsItem> news;
    news.push_back(make_news(0, 0, {1, 0}, 0, 1));  // expired by round 3
    news.push_back(make_news(1, 1, {0, 1}));
    news.push_back(make_news(2, 0, {1, 1}, 2, 5));
    c.owned = {0, 2};
    RngStream rng(1, "sel");
    const auto anchors = creator_select_topics(c, news, 2, 400, 1e-8, rng);
    ASSERT_EQ(anchors.size(), 400u);
    std::size_t zero = 0;
    for (NewsId a : anchors) {
        EXPECT_TRUE(a == 0 || a == 2);
        zero += a == 0;
    }
    EXPECT_GT(zero, 100u);  // equal last-round likes: both anchors near 1/2
    EXPECT_LT(zero, 300u);

    CreatorState lonely;
    lonely.owned = {1};
    for (NewsId a : creator_select_topics(lonely, news, 0, 5, 1e-8, rng)) EXPECT_EQ(a, 1u);
}

TEST(CreatorProduction, QualityAndZeroConcentration) {
    EXPECT_DOUBLE_EQ(news_quality(0), 0.0);
    EXPECT_NEAR(news_quality(1), 0.6931471805599453, 1e-15);

    CreatorState c;
    c.id = 3;
    c.concentration = 0.0;
    c.last_round_likes = 4;
    std::vector<NewsItem> news{make_news(0, 3, {0.5, -1.0, 2.0})};
    const std::vector<NewsId> anchors{0, 0};
    ProductionParams params{0.1, 7, 5};
    RngStream rng(2, "prod");
    const auto made = creator_produce_news(c, anchors, news, params, 10, rng);
    ASSERT_EQ(made.size(), 2u);
    for (std::size_t i = 0; i < made.size(); ++i) {
        EXPECT_EQ(made[i].id, 10 + i);
        EXPECT_EQ(made[i].creator, 3u);
        EXPECT_EQ(made[i].latent, news[0].latent);
        EXPECT_DOUBLE_EQ(made[i].quality, std::log(5.0));
        EXPECT_EQ(made[i].created_round, 7u);
        EXPECT_TRUE(made[i].active_in(11));
        EXPECT_FALSE(made[i].active_in(12));
    }
}

TEST(CreatorProduction, SpreadScalesWithConcentration) {
    CreatorState c;
    c.concentration = 0.5;
    std::vector<NewsItem> news{make_news(0, 0, LatentVector(50, 0.0))};
    std::vector<NewsId> anchors(200, 0);
    RngStream rng(3, "prod");
    const auto made = creator_produce_news(c, anchors, news, {0.2, 1, 5}, 1, rng);
    double ss = 0;
    std::size_t n = 0;
    for (const auto& m : made)
        for (double x : m.latent) {
            ss += x * x;
            ++n;
        }
    EXPECT_NEAR(std::sqrt(ss / n), 0.5 * 0.2, 0.005);
}

TEST(Clicks, TwoItemProbability) {
    const std::vector<double> scores{2.0, 0.0};
    RngStream rng(4, "click");
    const int trials = 20000;
    int first = 0;
    for (int t = 0; t < trials; ++t) first += sample_clicks(scores, 1, rng)[0] == 0;
    const double p = std::exp(2.0) / (std::exp(2.0) + 1.0);
    EXPECT_NEAR(static_cast<double>(first) / trials, p, 4 * std::sqrt(p * (1 - p) / trials));
}

TEST(Clicks, DistinctAndClipped) {
    const std::vector<double> scores{0.1, 0.5, 0.2, 0.9, 0.0};
    RngStream rng(5, "click");
    auto picks = sample_clicks(scores, 3, rng);
    std::sort(picks.begin(), picks.end());
    EXPECT_EQ(std::unique(picks.begin(), picks.end()), picks.end());
    EXPECT_EQ(picks.size(), 3u);
    EXPECT_EQ(sample_clicks(scores, 10, rng).size(), 5u);
}

TEST(Clicks, ZeroConcentrationIsUniform) {
    UserState u;
    u.latent = {1.0, 0.0};
    u.concentration = 0.0;
    std::vector<NewsItem> news{make_news(0, 0, {1, 0}), make_news(1, 0, {0, 1}), make_news(2, 0, {-1, 0})};
    const std::vector<NewsId> list{0, 1, 2};
    RngStream rng(6, "click");
    std::array<int, 3> hits{};
    for (int t = 0; t < 9000; ++t) ++hits[user_click(u, list, news, 1, rng)[0]];
    for (int h : hits) EXPECT_NEAR(h / 9000.0, 1.0 / 3.0, 0.02);
}

TEST(Like, UtilityRule) {
    UserState u;
    u.latent = {1.0, 0.0};
    auto item = make_news(0, 0, {1.0, std::sqrt(3.0)});  // cosine 0.5
    u.alpha = 1.0;
    u.threshold = 0.3;
    auto d = user_like(u, item, 1.0);
    EXPECT_NEAR(d.utility, 0.5, 1e-12);
    EXPECT_TRUE(d.liked);

    u.alpha = 0.0;
    item.quality = 0.0;
    d = user_like(u, item, 2.0);
    EXPECT_EQ(d.utility, 0.0);
    EXPECT_FALSE(d.liked);

    // alpha 0.5, cosine 0.2, Q / Qmax 0.6
    u.alpha = 0.5;
    u.threshold = 0.35;
    auto other = make_news(1, 0, {0.2, std::sqrt(1 - 0.04)});
    other.quality = 0.6 * 3.0;
    d = user_like(u, other, 3.0);
    EXPECT_NEAR(d.utility, 0.4, 1e-12);
    EXPECT_TRUE(d.liked);
    EXPECT_NEAR(max_quality(5, 10000), std::log(50001.0), 1e-12);
}

LatentVector drift_oracle(const LatentVector& h, double rho, const std::vector<DriftTerm>& terms, double delta,
                          double eps) {
    LatentVector out = h;
    for (const auto& t : terms) {
        LatentVector dir = *t.news_latent - h;
        double n = 0;
        for (double x : dir) n += x * x;
        n = std::sqrt(n);
        if (n == 0) continue;
        const double step = (t.liked ? 1.0 : -1.0) * delta * std::exp(-rho / (std::max(t.utility, 0.0) + eps));
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += step * dir[k] / n;
    }
    return out;
}

TEST(Drift, MatchesOracleAndBound) {
    RngStream rng(7, "drift");
    for (int trial = 0; trial < 50; ++trial) {
        LatentVector h(6);
        for (double& x : h) x = rng.normal();
        std::vector<LatentVector> latents(10, LatentVector(6));
        std::vector<DriftTerm> terms;
        for (auto& v : latents) {
            for (double& x : v) x = rng.normal();
            terms.push_back({&v, rng.uniform() < 0.5, rng.uniform() * 1.2 - 0.2});
        }
        const double rho = rng.uniform();
        const auto got = user_drift(h, rho, terms, 0.1, 1e-8);
        const auto want = drift_oracle(h, rho, terms, 0.1, 1e-8);
        for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
        EXPECT_LE(norm((got - h).span()), 10 * 0.1 + 1e-12);
    }
}

TEST(Drift, DegenerateCases) {
    const LatentVector h{1.0, 2.0};
    EXPECT_EQ(user_drift(h, 0.5, {}, 0.1, 1e-8), h);
    const LatentVector same = h;
    const std::vector<DriftTerm> self{{&same, true, 0.9}};
    EXPECT_EQ(user_drift(h, 0.5, self, 0.1, 1e-8), h);
    const LatentVector far{5.0, 2.0};
    const std::vector<DriftTerm> clipped{{&far, true, -0.3}};
    EXPECT_LT(norm((user_drift(h, 0.5, clipped, 0.1, 1e-8) - h).span()), 1e-300);
}

}  // namespace
}  // namespace nre::agents
