#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nre/agents/types.hpp"
#include "nre/core/rng.hpp"

namespace nre::agents {

/// ln(likes + 1).
double news_quality(std::uint64_t creator_likes) noexcept;

/// Greedy topic preference: softmax over exp(-(1 - rho) / (D_j + eps)).
std::vector<double> creator_selection_probabilities(double concentration, std::span<const double> previous_likes,
                                                    double epsilon);

/// K anchors drawn with replacement from all news the creator ever produced,
/// weighted by the LIKEs each received in round `previous_round`.
std::vector<NewsId> creator_select_topics(const CreatorState& creator, const std::vector<NewsItem>& news,
                                          Round previous_round, std::size_t count, double epsilon, RngStream& rng);

struct ProductionParams {
    double delta = 0.1;
    Round round = 0;
    Round active_rounds = 5;
};

/// One news per anchor, latent ~ N(anchor latent, (rho^C * delta)^2 I),
/// quality ln(D^C + 1) shared by the batch. Ids start at `first_id`.
std::vector<NewsItem> creator_produce_news(const CreatorState& creator, std::span<const NewsId> anchors,
                                           const std::vector<NewsItem>& news, const ProductionParams& params,
                                           NewsId first_id, RngStream& rng);

/// Initial pool: K news around the creator's own latent.
std::vector<NewsItem> creator_initial_news(const CreatorState& creator, std::size_t count,
                                           const ProductionParams& params, NewsId first_id, RngStream& rng);

}  // namespace nre::agents
