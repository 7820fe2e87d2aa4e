#include "nre/recsys/channels.hpp"

#include <algorithm>
#include <unordered_set>

#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/recsys/slate.hpp"

namespace nre::recsys {

std::string_view to_string(Channel c) noexcept {
    switch (c) {
        case Channel::Algorithmic: return "algorithmic";
        case Channel::ColdRandom: return "cold-random";
        case Channel::ColdAffinity: return "cold-affinity";
        case Channel::Breaking: return "breaking";
        case Channel::Promotion: return "promotion";
    }
    return "unknown";
}

namespace {

std::vector<NewsId> sample_ids(std::span<const NewsId> pool, std::size_t count, RngStream& rng) {
    std::vector<NewsId> out;
    for (std::size_t idx : sample_without_replacement(pool.size(), count, rng)) out.push_back(pool[idx]);
    return out;
}

}  // namespace

std::vector<NewsId> recommend_algorithmic(const RankingModel* model, const agents::UserState& user,
                                          std::span<const NewsId> active_news, std::size_t count, RngStream& rng) {
    if (model != nullptr && model->covers_user(user.id)) {
        const std::size_t ur = *model->user_row(user.id);
        std::vector<std::pair<double, NewsId>> scored;
        scored.reserve(model->covered_news().size());
        for (NewsId n : model->covered_news()) {
            if (user.has_clicked(n) || !std::binary_search(active_news.begin(), active_news.end(), n)) continue;
            scored.emplace_back(model->score_rows(ur, *model->news_row(n)), n);
        }
        const auto better = [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        };
        const std::size_t take = std::min(count, scored.size());
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
        std::vector<NewsId> out;
        out.reserve(take);
        for (std::size_t k = 0; k < take; ++k) out.push_back(scored[k].second);
        return out;
    }
    std::vector<NewsId> pool;
    pool.reserve(active_news.size());
    for (NewsId n : active_news) {
        if (!user.has_clicked(n)) pool.push_back(n);
    }
    return sample_ids(pool, count, rng);
}

std::vector<NewsId> recommend_cold_start(ColdStartMode mode, const agents::UserState& user,
                                         std::span<const NewsId> fresh_news, const std::vector<agents::NewsItem>& news,
                                         std::size_t count, RngStream& rng) {
    if (mode == ColdStartMode::Random || user.likes_by_creator.empty()) return sample_ids(fresh_news, count, rng);

    std::vector<std::pair<std::uint32_t, NewsId>> affine;
    std::vector<NewsId> rest;
    for (NewsId n : fresh_news) {
        const auto it = user.likes_by_creator.find(news[n].creator);
        if (it != user.likes_by_creator.end() && it->second > 0) {
            affine.emplace_back(it->second, n);
        } else {
            rest.push_back(n);
        }
    }
    std::sort(affine.begin(), affine.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<NewsId> out;
    for (const auto& [likes, n] : affine) {
        if (out.size() == count) return out;
        out.push_back(n);
    }
    for (NewsId n : sample_ids(rest, count - out.size(), rng)) out.push_back(n);
    return out;
}

std::vector<NewsId> recommend_breaking(std::span<const NewsId> active_news, const std::vector<agents::NewsItem>& news,
                                       std::span<const NewsId> last_algorithmic, Round previous_round,
                                       std::size_t count) {
    std::vector<std::pair<std::uint32_t, NewsId>> pool;
    for (NewsId n : active_news) {
        if (std::binary_search(last_algorithmic.begin(), last_algorithmic.end(), n)) continue;
        const std::uint32_t likes = news[n].likes_in(previous_round);
        if (likes > 0) pool.emplace_back(likes, n);
    }
    const std::size_t take = std::min(count, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                      [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::vector<NewsId> out;
    for (std::size_t k = 0; k < take; ++k) out.push_back(pool[k].second);
    return out;
}

std::vector<NewsId> recommend_promotion_creators(std::span<const CreatorId> promoted,
                                                 std::span<const NewsId> active_news,
                                                 const std::vector<agents::NewsItem>& news, std::size_t count,
                                                 RngStream& rng) {
    std::vector<NewsId> pool;
    for (NewsId n : active_news) {
        if (std::binary_search(promoted.begin(), promoted.end(), news[n].creator)) pool.push_back(n);
    }
    return sample_ids(pool, count, rng);
}

std::vector<NewsId> recommend_promotion_topics(std::span<const LatentVector> topic_means,
                                               std::span<const NewsId> active_news,
                                               const std::vector<agents::NewsItem>& news, std::size_t count) {
    if (topic_means.empty()) return {};
    std::vector<double> mean_norms;
    for (const auto& m : topic_means) mean_norms.push_back(norm(m));
    std::vector<std::pair<double, NewsId>> scored;
    scored.reserve(active_news.size());
    for (NewsId n : active_news) {
        const auto& item = news[n];
        double best = -2.0;
        for (std::size_t t = 0; t < topic_means.size(); ++t) {
            if (mean_norms[t] == 0.0 || item.latent_norm == 0.0) continue;
            best = std::max(best, cosine_with_norms(item.latent, item.latent_norm, topic_means[t], mean_norms[t]));
        }
        scored.emplace_back(best, n);
    }
    const std::size_t take = std::min(count, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::vector<NewsId> out;
    for (std::size_t k = 0; k < take; ++k) out.push_back(scored[k].second);
    return out;
}

std::size_t RecommendationSlate::count(Channel c) const noexcept {
    return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), c));
}

RecommendationSlate merge_slate(std::span<const ChannelCandidates> channels, std::size_t length,
                                std::span<const NewsId> backfill_pool,
                                const std::function<bool(NewsId)>& excluded, RngStream& rng) {
    RecommendationSlate slate;
    std::unordered_set<NewsId> listed;
    const auto admissible = [&](NewsId n) { return !listed.contains(n) && !(excluded && excluded(n)); };
    const auto place = [&](NewsId n, Channel c) {
        listed.insert(n);
        slate.items.push_back(n);
        slate.tags.push_back(c);
    };

    for (const auto& ch : channels) {
        std::size_t placed = 0;
        for (NewsId n : ch.candidates) {
            if (placed == ch.budget || slate.size() == length) break;
            if (!admissible(n)) continue;
            place(n, ch.channel);
            ++placed;
        }
    }
    for (const auto& ch : channels) {
        if (ch.channel != Channel::Algorithmic) continue;
        for (NewsId n : ch.candidates) {
            if (slate.size() >= length) break;
            if (admissible(n)) place(n, Channel::Algorithmic);
        }
    }
    if (slate.size() < length) {
        for (std::size_t idx : sample_without_replacement(backfill_pool.size(), backfill_pool.size(), rng)) {
            if (slate.size() >= length) break;
            const NewsId n = backfill_pool[idx];
            if (admissible(n)) place(n, Channel::Algorithmic);
        }
    }
    return slate;
}

}  // namespace nre::recsys
