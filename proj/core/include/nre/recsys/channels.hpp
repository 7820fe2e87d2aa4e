#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nre/agents/types.hpp"
#include "nre/core/latent.hpp"
#include "nre/core/rng.hpp"
#include "nre/recsys/training.hpp"

namespace nre::recsys {

enum class Channel : std::uint8_t { Algorithmic, ColdRandom, ColdAffinity, Breaking, Promotion };

inline constexpr std::size_t kChannelCount = 5;

std::string_view to_string(Channel c) noexcept;

enum class ColdStartMode : std::uint8_t { Random, Affinity };
enum class PromotionMode : std::uint8_t { None, Creator, Topic };

/// Covered users: the `count` best-scored covered news they have not clicked
/// (ties by smaller id, no RNG). Everyone else, or a null model: a uniform
/// sample of unclicked active news.
std::vector<NewsId> recommend_algorithmic(const RankingModel* model, const agents::UserState& user,
                                          std::span<const NewsId> active_news, std::size_t count, RngStream& rng);

/// Random mode: uniform sample of fresh news. Affinity mode: fresh news whose
/// creator the user liked before, by descending historical LIKE count (ties by
/// smaller id), then random fresh news.
std::vector<NewsId> recommend_cold_start(ColdStartMode mode, const agents::UserState& user,
                                         std::span<const NewsId> fresh_news, const std::vector<agents::NewsItem>& news,
                                         std::size_t count, RngStream& rng);

/// Most-liked news of `previous_round` among active news absent from every
/// algorithmic channel that round (`last_algorithmic` sorted). News without
/// LIKEs never qualify. Ties by smaller id.
std::vector<NewsId> recommend_breaking(std::span<const NewsId> active_news, const std::vector<agents::NewsItem>& news,
                                       std::span<const NewsId> last_algorithmic, Round previous_round,
                                       std::size_t count);

/// Uniform sample of active news by the promoted creators (`promoted` sorted).
std::vector<NewsId> recommend_promotion_creators(std::span<const CreatorId> promoted,
                                                 std::span<const NewsId> active_news,
                                                 const std::vector<agents::NewsItem>& news, std::size_t count,
                                                 RngStream& rng);

/// Active news ordered by their best cosine to any promoted topic mean
/// (descending, ties by smaller id).
std::vector<NewsId> recommend_promotion_topics(std::span<const LatentVector> topic_means,
                                               std::span<const NewsId> active_news,
                                               const std::vector<agents::NewsItem>& news, std::size_t count);

}  // namespace nre::recsys
