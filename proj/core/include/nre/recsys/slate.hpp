#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nre/core/rng.hpp"
#include "nre/recsys/channels.hpp"

namespace nre::recsys {

/// One user's final list, each item tagged with the channel that placed it.
struct RecommendationSlate {
    std::vector<NewsId> items;
    std::vector<Channel> tags;

    std::size_t size() const noexcept { return items.size(); }
    std::size_t count(Channel c) const noexcept;
};

/// Candidates offered by one channel; up to `budget` of them are placed.
struct ChannelCandidates {
    Channel channel = Channel::Algorithmic;
    std::vector<NewsId> candidates;
    std::size_t budget = 0;
};

/// Channels are visited in the given (priority) order and each places up to
/// its budget of candidates that are neither excluded nor already listed, so
/// a duplicate keeps its earliest channel. Remaining slots are filled from the
/// unused algorithmic candidates, then from random non-excluded news of
/// `backfill_pool`. Final length is min(length, eligible news).
RecommendationSlate merge_slate(std::span<const ChannelCandidates> channels, std::size_t length,
                                std::span<const NewsId> backfill_pool,
                                const std::function<bool(NewsId)>& excluded, RngStream& rng);

}  // namespace nre::recsys
