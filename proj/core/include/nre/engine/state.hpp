#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nre/agents/types.hpp"
#include "nre/core/latent.hpp"
#include "nre/metrics/round_report.hpp"
#include "nre/recsys/slate.hpp"
#include "nre/recsys/training.hpp"

namespace nre::engine {

/// Everything needed to continue a run. Per-round random streams are derived
/// from `seed` and the round index, so no generator positions are stored.
struct SimState {
    std::uint64_t seed = 0;
    Round round = 0;  ///< last completed round; 0 right after initialisation
    std::vector<agents::UserState> users;
    std::vector<agents::CreatorState> creators;
    std::vector<agents::NewsItem> news;  ///< indexed by id
    std::vector<NewsId> active_news;     ///< sorted
    /// LIKEs young enough to matter for training or the homogenisation window.
    std::vector<recsys::LikeEvent> recent_likes;
    /// News placed by the algorithmic channel in `round` (sorted).
    std::vector<NewsId> last_algorithmic;
    std::vector<LatentVector> topic_means;
    std::vector<CreatorId> promoted_creators;  ///< sorted
    std::vector<std::size_t> promoted_topics;  ///< sorted
    Round promotion_drawn = 0;                 ///< round of the current draw; 0 = none yet
    std::optional<recsys::RankingModel> model;  ///< ranker used in `round`
    std::vector<metrics::RoundReport> reports;
};

/// Per-user record of one round, kept only when tracing is requested.
struct UserRoundTrace {
    recsys::RecommendationSlate slate;
    std::vector<NewsId> clicked;
    std::vector<NewsId> liked;
    double displacement = 0.0;
};

struct RoundTrace {
    Round round = 0;
    std::vector<NewsId> fresh_news;
    std::vector<UserRoundTrace> users;
    std::vector<std::uint64_t> news_likes;     ///< indexed by news id, this round only
    std::vector<std::uint64_t> creator_likes;  ///< this round only
};

/// Referential integrity and activity-window consistency; throws Error.
void check_state(const SimState& state);

}  // namespace nre::engine
