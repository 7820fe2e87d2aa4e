#include "nre/datagen/unbiased_bpr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/error.hpp"

namespace nre::datagen {

double unbiased_bpr_objective(const DenseMatrix& users, std::span<const LatentVector> news,
                              std::span<const WeightedPair> pairs, double l2) {
    double total = 0.0;
    for (const auto& p : pairs) {
        const auto u = users.row(p.user);
        const double diff = dot(u, news[p.positive]) - dot(u, news[p.negative]);
        total += p.weight * log_sigmoid(diff);
    }
    const double mean = pairs.empty() ? 0.0 : total / static_cast<double>(pairs.size());
    return mean - l2 * squared_norm(users.flat());
}

DenseMatrix unbiased_bpr_gradient(const DenseMatrix& users, std::span<const LatentVector> news,
                                  std::span<const WeightedPair> pairs, double l2) {
    DenseMatrix grad(users.rows(), users.cols());
    const double inv = pairs.empty() ? 0.0 : 1.0 / static_cast<double>(pairs.size());
    for (const auto& p : pairs) {
        const auto u = users.row(p.user);
        const auto& ni = news[p.positive];
        const auto& nj = news[p.negative];
        const double diff = dot(u, ni) - dot(u, nj);
        // d/dx ln sigma(x) = 1 - sigma(x) = sigma(-x)
        const double coeff = p.weight * sigmoid(-diff) * inv;
        auto g = grad.row(p.user);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] += coeff * (ni[k] - nj[k]);
    }
    auto g = grad.flat();
    const auto w = users.flat();
    for (std::size_t k = 0; k < g.size(); ++k) g[k] -= 2.0 * l2 * w[k];
    return grad;
}

std::vector<WeightedPair> build_weighted_pairs(const InteractionLog& log, const PropensityModel& propensity,
                                               std::size_t negative_ratio, RngStream& rng) {
    std::vector<std::vector<NewsId>> positives(log.user_count);
    for (const auto& rec : log.records) {
        if (rec.positive) positives[rec.user].push_back(rec.news);
    }
    for (auto& list : positives) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    std::vector<WeightedPair> pairs;
    for (UserId u = 0; u < positives.size(); ++u) {
        const auto& pos = positives[u];
        if (pos.empty() || pos.size() >= log.news_count) continue;
        for (NewsId i : pos) {
            for (std::size_t r = 0; r < negative_ratio; ++r) {
                NewsId j = 0;
                do {
                    j = static_cast<NewsId>(rng.uniform_index(log.news_count));
                } while (std::binary_search(pos.begin(), pos.end(), j));
                const double w = ips_pair_weight(true, propensity.theta[i], false, propensity.theta[j]);
                pairs.push_back({u, i, j, w});
            }
        }
    }
    return pairs;
}

UserLatentFit fit_unbiased_bpr(const InteractionLog& log, std::span<const LatentVector> news_latents,
                               const PropensityModel& propensity, const UserLatentFitConfig& config,
                               RngStream& rng) {
    if (news_latents.size() < log.news_count) throw FormatError("missing news latents for interaction log ids");
    if (propensity.theta.size() < log.news_count) throw FormatError("propensity model does not cover all news");
    if (news_latents.empty()) throw DegenerateInputError("no news latents");
    const std::size_t dim = news_latents.front().size();

    UserLatentFit fit;
    std::vector<bool> has_positive(log.user_count, false);
    for (const auto& rec : log.records) {
        if (rec.positive) has_positive[rec.user] = true;
    }
    for (UserId u = 0; u < log.user_count; ++u) {
        (has_positive[u] ? fit.retained_users : fit.excluded_users).push_back(u);
    }

    RngStream init_rng = rng.derive("init");
    fit.users = DenseMatrix(log.user_count, dim);
    for (UserId u : fit.retained_users) {
        for (double& v : fit.users.row(u)) v = config.init_std * init_rng.normal();
    }

    RngStream pair_rng = rng.derive("pairs");
    std::vector<WeightedPair> pairs = build_weighted_pairs(log, propensity, config.negative_ratio, pair_rng);
    if (pairs.empty()) return fit;

    AdamOptimizer optimizer(fit.users.flat().size(), {config.learning_rate, 0.9, 0.999, 1e-8});
    RngStream order_rng = rng.derive("order");
    const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
    std::vector<double> descent(fit.users.flat().size());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_in_place(pairs, order_rng);
        for (std::size_t start = 0; start < pairs.size(); start += batch) {
            const std::size_t len = std::min(batch, pairs.size() - start);
            const std::span<const WeightedPair> slice(pairs.data() + start, len);
            const DenseMatrix ascent = unbiased_bpr_gradient(fit.users, news_latents, slice, config.l2);
            const auto a = ascent.flat();
            for (std::size_t k = 0; k < descent.size(); ++k) descent[k] = -a[k];
            optimizer.step(fit.users.flat(), descent);
        }
        fit.epoch_objective.push_back(unbiased_bpr_objective(fit.users, news_latents, pairs, config.l2));
    }
    return fit;
}

std::vector<LatentVector> creator_latents_from_news(std::span<const std::vector<LatentVector>> news_by_creator) {
    std::vector<LatentVector> out;
    out.reserve(news_by_creator.size());
    for (std::size_t c = 0; c < news_by_creator.size(); ++c) {
        if (news_by_creator[c].empty()) {
            throw DegenerateInputError("creator " + std::to_string(c) + " has no news");
        }
        out.push_back(mean_of(news_by_creator[c]));
    }
    return out;
}

}  // namespace nre::datagen
