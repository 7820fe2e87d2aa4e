#include <algorithm>
#include <cmath>

#include "nre/agents/creator.hpp"
#include "nre/agents/user.hpp"
#include "nre/core/math.hpp"
#include "nre/core/sampling.hpp"
#include "nre/error.hpp"

namespace nre::agents {

bool UserState::has_clicked(NewsId n) const { return std::binary_search(clicked.begin(), clicked.end(), n); }

bool UserState::has_liked(NewsId n) const { return std::binary_search(liked.begin(), liked.end(), n); }

void insert_sorted(std::vector<NewsId>& ids, NewsId id) {
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) ids.insert(it, id);
}

double news_quality(std::uint64_t creator_likes) noexcept {
    return std::log(static_cast<double>(creator_likes) + 1.0);
}

std::vector<double> creator_selection_probabilities(double concentration, std::span<const double> previous_likes,
                                                    double epsilon) {
    std::vector<double> values(previous_likes.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        values[j] = std::exp(-(1.0 - concentration) / (previous_likes[j] + epsilon));
    }
    return softmax(values);
}

std::vector<NewsId> creator_select_topics(const CreatorState& creator, const std::vector<NewsItem>& news,
                                          Round previous_round, std::size_t count, double epsilon, RngStream& rng) {
    if (creator.owned.empty()) throw DegenerateInputError("creator " + std::to_string(creator.id) + " owns no news");
    std::vector<double> likes(creator.owned.size());
    for (std::size_t j = 0; j < likes.size(); ++j) likes[j] = news[creator.owned[j]].likes_in(previous_round);
    const auto probs = creator_selection_probabilities(creator.concentration, likes, epsilon);
    std::vector<NewsId> anchors;
    anchors.reserve(count);
    for (std::size_t k = 0; k < count; ++k) anchors.push_back(creator.owned[sample_categorical(probs, rng)]);
    return anchors;
}

namespace {

NewsItem make_news(const CreatorState& creator, LatentVector latent, const ProductionParams& params, NewsId id) {
    NewsItem item;
    item.id = id;
    item.creator = creator.id;
    item.latent_norm = norm(latent);
    item.latent = std::move(latent);
    item.quality = news_quality(creator.last_round_likes);
    item.created_round = params.round;
    item.active_rounds = params.active_rounds;
    item.likes_by_age.assign(params.active_rounds, 0);
    return item;
}

}  // namespace

std::vector<NewsItem> creator_produce_news(const CreatorState& creator, std::span<const NewsId> anchors,
                                           const std::vector<NewsItem>& news, const ProductionParams& params,
                                           NewsId first_id, RngStream& rng) {
    std::vector<NewsItem> out;
    out.reserve(anchors.size());
    const double scale = creator.concentration * params.delta;
    for (std::size_t k = 0; k < anchors.size(); ++k) {
        auto latent = sample_gaussian_vector(news.at(anchors[k]).latent, scale, rng);
        out.push_back(make_news(creator, std::move(latent), params, first_id + static_cast<NewsId>(k)));
    }
    return out;
}

std::vector<NewsItem> creator_initial_news(const CreatorState& creator, std::size_t count,
                                           const ProductionParams& params, NewsId first_id, RngStream& rng) {
    std::vector<NewsItem> out;
    out.reserve(count);
    const double scale = creator.concentration * params.delta;
    for (std::size_t k = 0; k < count; ++k) {
        auto latent = sample_gaussian_vector(creator.latent, scale, rng);
        out.push_back(make_news(creator, std::move(latent), params, first_id + static_cast<NewsId>(k)));
    }
    return out;
}

std::vector<std::size_t> sample_clicks(std::span<const double> scores, std::size_t n_click, RngStream& rng) {
    if (scores.empty()) throw DegenerateInputError("click sampling over an empty list");
    std::vector<double> weights = softmax(scores);
    const std::size_t take = std::min(n_click, scores.size());
    std::vector<std::size_t> picked;
    picked.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
        const std::size_t idx = sample_categorical(weights, rng);
        picked.push_back(idx);
        weights[idx] = 0.0;
        // sample_categorical renormalises over the remaining mass; fall back to
        // uniform if every remaining weight underflowed.
        const bool exhausted = std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; });
        if (exhausted && k + 1 < take) {
            for (std::size_t i = 0; i < weights.size(); ++i) {
                if (std::find(picked.begin(), picked.end(), i) == picked.end()) weights[i] = 1.0;
            }
        }
    }
    return picked;
}

std::vector<std::size_t> user_click(const UserState& user, std::span<const NewsId> list,
                                    const std::vector<NewsItem>& news, std::size_t n_click, RngStream& rng) {
    const double user_norm = norm(user.latent);
    if (user_norm == 0.0) throw DegenerateInputError("user latent has zero norm");
    std::vector<double> scores(list.size());
    for (std::size_t k = 0; k < list.size(); ++k) {
        const auto& item = news[list[k]];
        if (item.latent_norm == 0.0) throw DegenerateInputError("news latent has zero norm");
        scores[k] = user.concentration * cosine_with_norms(user.latent, user_norm, item.latent, item.latent_norm);
    }
    return sample_clicks(scores, n_click, rng);
}

LikeDecision user_like(const UserState& user, const NewsItem& item, double max_quality) {
    LikeDecision d;
    d.cosine = cosine(user.latent, item.latent);
    d.utility = user.alpha * d.cosine + (1.0 - user.alpha) * item.quality / max_quality;
    d.liked = d.utility > user.threshold;
    return d;
}

double max_quality(std::size_t news_per_creator, std::size_t user_count) noexcept {
    return std::log(static_cast<double>(news_per_creator) * static_cast<double>(user_count) + 1.0);
}

LatentVector user_drift(const LatentVector& latent, double concentration, std::span<const DriftTerm> clicked,
                        double delta, double epsilon) {
    LatentVector out = latent;
    LatentVector direction(latent.size());
    for (const auto& term : clicked) {
        const LatentVector& n = *term.news_latent;
        for (std::size_t k = 0; k < latent.size(); ++k) direction[k] = n[k] - latent[k];
        const double length = norm(direction);
        if (length == 0.0) continue;
        const double sign = term.liked ? 1.0 : -1.0;
        const double step = delta * std::exp(-concentration / (std::max(term.utility, 0.0) + epsilon));
        if (step == 0.0) continue;
        const double factor = sign * step / length;
        for (std::size_t k = 0; k < latent.size(); ++k) out[k] += factor * direction[k];
    }
    return out;
}

}  // namespace nre::agents
